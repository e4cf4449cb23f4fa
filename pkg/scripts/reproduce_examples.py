"""Compute the growth tables and comparisons for the worked examples and
write them as CSV/JSON under an output directory.

    python3 scripts/reproduce_examples.py --out results --radius 8
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from cgw import __version__
from cgw.engines import build_engine, word_to_element
from cgw.equivgrowth import SampledFunction, equiv_verdict, preceq_witness, reference_function
from cgw.growth import conjugacy_growth_table, growth_table, primitive_growth_table, translation_number_estimate


@dataclass
class ExperimentConfig:
    out: str = "results"
    radius: int = 8
    heisenberg_radius: int = 12
    hnn_radius: int = 4
    cmax: int = 4
    threads: int = 1
    groups: list = field(default_factory=lambda: ["free(2)", "product(cyclic(3), cyclic(3))", "heisenberg"])


def _stem(desc: str) -> str:
    return "".join(ch if ch.isalnum() else "_" for ch in desc).strip("_")


def run(cfg: ExperimentConfig) -> dict:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    prov = {"tool": f"cgw {__version__}", "config": json.dumps(asdict(cfg), sort_keys=True)}
    summary = {}
    for desc in cfg.groups:
        N = cfg.heisenberg_radius if desc == "heisenberg" else cfg.radius
        kinds = {"gamma": growth_table, "xi": conjugacy_growth_table, "pi": primitive_growth_table}
        if desc == "heisenberg":
            # the full ball is large at this radius; gamma is only needed up to the default radius
            kinds["gamma"] = lambda e, n, threads=1: growth_table(e, min(n, cfg.radius), threads=threads)
        row = {}
        for kind, fn in kinds.items():
            t0 = time.perf_counter()
            table = fn(build_engine(desc), N, threads=cfg.threads)
            (out / f"{kind}_{_stem(desc)}.csv").write_text(table.to_csv(prov))
            row[kind] = {"values": table.values, "seconds": round(time.perf_counter() - t0, 2)}
        summary[desc] = row
        print(f"{desc}: " + "; ".join(f"{k}={v['values']}" for k, v in row.items()))

    # growth-type comparisons against the reference functions
    comparisons = {}
    for desc, ref in (("free(2)", "exp(3)"), ("product(cyclic(3), cyclic(3))", "exp(2)"), ("heisenberg", "nsq_log")):
        xi = summary[desc]["xi"]["values"]
        f = SampledFunction(f"xi[{desc}]", {n: xi[n] for n in range(1, len(xi))})
        v = equiv_verdict(f, reference_function(ref, f.N), cfg.cmax)
        comparisons[f"{desc} ~ {ref}"] = v.to_dict()
        print(f"xi[{desc}] ~ {ref}: {v.relation} (C={v.C})")
    xi_h = summary["heisenberg"]["xi"]["values"]
    f = SampledFunction("xi[heisenberg]", {n: xi_h[n] for n in range(1, len(xi_h))})
    v = preceq_witness(reference_function("poly(2)", f.N), f, cfg.cmax)
    comparisons["poly(2) <= xi[heisenberg]"] = v.to_dict()
    print(f"poly(2) <= xi[heisenberg]: {v.relation} (C={v.C})")

    # bracketed conjugacy growth of an HNN extension
    hnn = "hnn(free(2), a='x', b='y')"
    t = conjugacy_growth_table(build_engine(hnn), cfg.hnn_radius, threads=cfg.threads)
    (out / f"xi_{_stem(hnn)}.csv").write_text(t.to_csv(prov))
    summary[hnn] = {"xi": {"lower": t.lower, "upper": t.upper}}
    print(f"{hnn}: xi in [{t.lower}, {t.upper}]")

    # distortion of the Heisenberg center
    e = build_engine("heisenberg")
    est = translation_number_estimate(e, word_to_element(e, "c"), 36)
    summary["translation c"] = {"lengths": est.lengths, "distorted": est.distorted}
    print(f"heisenberg |c^n|: {est.lengths} distorted={est.distorted}")

    (out / "summary.json").write_text(json.dumps({"summary": summary, "comparisons": comparisons},
                                                 indent=2, sort_keys=True, default=str) + "\n")
    return summary


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    d = ExperimentConfig()
    p.add_argument("--out", default=d.out)
    p.add_argument("--radius", type=int, default=d.radius)
    p.add_argument("--heisenberg-radius", type=int, default=d.heisenberg_radius)
    p.add_argument("--hnn-radius", type=int, default=d.hnn_radius)
    p.add_argument("--cmax", type=int, default=d.cmax)
    p.add_argument("--threads", type=int, default=d.threads)
    a = p.parse_args()
    run(ExperimentConfig(a.out, a.radius, a.heisenberg_radius, a.hnn_radius, a.cmax, a.threads))


if __name__ == "__main__":
    main()
