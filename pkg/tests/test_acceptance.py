"""Acceptance gate: eleven criteria, each checked at its stated tolerance.

Every criterion reads the records of the default-seed suite reports and
re-applies the stated threshold to the observed numbers, so a case that
reports "pass" under a looser tolerance would still fail here. A one-line
verdict per criterion is printed at the end of the pytest session, or by
running this file directly.
"""
import json

import pytest

from ceslab.lab import SuiteConfig, render_report, run_suite

_REPORTS = {}
VERDICTS = {}


def report(suite):
    """Default-seed report of ``suite`` as plain data, computed once per session."""
    if suite not in _REPORTS:
        _REPORTS[suite] = json.loads(render_report(run_suite(SuiteConfig(suite))))
    return _REPORTS[suite]


def cases(suite, prefix):
    found = [c for c in report(suite)["cases"] if c["name"].startswith(prefix)]
    assert found, f"no case {suite}:{prefix}*"
    return found


def one(suite, name):
    found = [c for c in report(suite)["cases"] if c["name"] == name]
    assert len(found) == 1, f"expected exactly one case {suite}:{name}"
    return found[0]


def judge(num, title, checks):
    """Record the verdict; ``checks`` is a list of ``(label, ok, observed)``."""
    bad = [f"{label}={obs}" for label, ok, obs in checks if not ok]
    VERDICTS[num] = (title, not bad, "; ".join(bad) if bad else f"{len(checks)} checks")
    assert not bad, f"criterion {num} ({title}) failed: " + "; ".join(bad)


def rel_checks(records, rtol):
    return [(c["name"], c["detail"]["relError"] <= rtol, c["detail"]["relError"]) for c in records]


def test_criterion_01_remark_values():
    out = rel_checks([one("examples", "remark1.values.L1"), one("examples", "remark1.values.CL1")], 1e-3)
    # the stated 1/3 for the iterated Cesaro norm is checked as written
    out += rel_checks([one("examples", "remark1.values.CCL1-third")], 1e-3)
    out += rel_checks([one("examples", f"remark1.ratio.alpha-e{k}") for k in (1, 2, 3)], 1e-3)
    cells = one("examples", "remark1.values.CCL1-third")["witness"]
    if cells is not None:
        out.append(("cells", cells["cells"] == 2 ** 14, cells["cells"]))
    judge(1, "f_alpha norms and log ratio", out)


def test_criterion_02_example_values():
    out = rel_checks([one("examples", "example2.values.L1")], 1e-3)
    out += rel_checks([one("examples", "example2.values.C(L1+Linf)")], 1e-2)
    div = one("examples", "example2.divergence")
    growth = div["detail"]["CLinf(1e-6)"] / div["detail"]["CLinf(1e-3)"]
    out.append(("CLinf growth 1e-3 -> 1e-6", growth >= 5, growth))
    judge(2, "Example with L1 + Linf, truncation divergence", out)


def test_criterion_03_identities():
    recs = cases("identities", "bennett.") + cases("identities", "continuous.")
    out = [(c["name"], c["observed"] <= 1e-9, c["observed"]) for c in recs]
    out.append(("samples", report("identities")["config"]["samples"] >= 100, report("identities")["config"]["samples"]))
    judge(3, "Bennett and continuous Cesaro-Copson identities", out)


def test_criterion_04_constants():
    cr = one("constants", "cr.ratio")
    out = [("cr.ratio", cr["observed"] <= 6.0, cr["observed"]),
           ("cr.samples", cr["detail"]["samples"] >= 10_000, cr["detail"]["samples"])]
    for c in [one("constants", "sigma2-copson.half")] + cases("constants", "lna.iteration."):
        out.append((c["name"], c["detail"]["minRatio"] >= 1.0, c["detail"]["minRatio"]))
    out.append(("lna.count", len(cases("constants", "lna.iteration.")) == 3, len(cases("constants", "lna.iteration."))))
    print(f"observed Curbera-Ricker supremum {cr['detail']['observedSup']:.6g}")
    judge(4, "explicit constants", out)


def test_criterion_05_power_cl_closed_form():
    recs = cases("calderon", "power.closed-form-grid.")
    out = [(c["name"], c["observed"] <= 1e-4, c["observed"]) for c in recs]
    out.append(("grid size", len(recs) == 27, len(recs)))
    judge(5, "power Calderon-Lozanovskii vs closed-form lp", out)


def test_criterion_06_conjugation():
    recs = cases("duality", "conjugate.involution.")
    kinds = {c["name"][len("conjugate.involution."):].rstrip("0123456789.") for c in recs}
    # every kind counts, including max: a flagged record carries its observed error all the same
    out = [(c["name"], c["observed"] <= 1e-6, c["observed"]) for c in recs]
    out.append(("kinds", kinds >= {"pow", "min", "sum", "max"}, sorted(kinds)))
    num = one("duality", "conjugate.power-half.numeric")
    out.append((num["name"], num["observed"] <= 1e-6, num["observed"]))
    judge(6, "conjugate involution and pow(1/2) conjugate", out)


def test_criterion_07_kfunctional():
    k = one("realmethod", "kfunctional.oracle")
    out = [("k_numeric vs k_exact", k["observed"] <= 1e-5, k["observed"]),
           ("functions x t", k["detail"]["functions"] >= 20 and k["detail"]["tPerFunction"] >= 16,
            (k["detail"]["functions"], k["detail"]["tPerFunction"]))]
    for c in cases("realmethod", "kprofile.invariants"):
        out.append((c["name"], c["status"] == "pass" and c["observed"] == 0, c["observed"]))
    judge(7, "K-functional oracle and profile invariants", out)


def test_criterion_08_embeddings():
    recs = cases("calderon", "embedding.cesaro.") + cases("calderon", "embedding.tandori.")
    out = [(c["name"], c["observed"] <= 1 + 1e-4, c["observed"]) for c in recs]
    judge(8, "Cesaro and Tandori embeddings of CL spaces", out)


ENVELOPES = [("calderon", "power.cesaro-envelope."), ("calderon", "power.tandori-envelope."),
             ("realmethod", "real.cesaro-envelope."), ("realmethod", "real.weighted-cesaro-reiteration")]


def envelope_checks(records):
    out = []
    for c in records:
        d = c["detail"]
        spread = d["max"] / d["min"]
        out.append((f"{c['name']}.spread", spread < 10, spread))
        out.append((f"{c['name']}.refinement", d["refinementChange"] < 0.05, d["refinementChange"]))
        out.append((f"{c['name']}.samples", d["samples"] >= 50, d["samples"]))
    return out


def test_criterion_09_envelopes():
    out = []
    for suite, prefix in ENVELOPES:
        out += envelope_checks(cases(suite, prefix))
    judge(9, "equivalence envelopes", out)


def test_criterion_10_duality():
    holder = cases("duality", "holder.exact-pairs.")
    pairs = sum(c["detail"]["pairs"] for c in holder)
    out = [(c["name"], c["observed"] <= 1 + 1e-12, c["observed"]) for c in holder]
    out.append(("pairs", pairs >= 10_000, pairs))
    o = one("duality", "oracle.weighted-lp")
    out.append((o["name"], o["observed"] <= 1e-6, o["observed"]))
    env = cases("duality", "cesaro-dual.sequences.")
    out += [(f"{c['name']}.spread", c["detail"]["max"] / c["detail"]["min"] < 10, c["detail"]["max"] / c["detail"]["min"])
            for c in env]
    judge(10, "Holder-Rogers, dual oracle, Cesaro dual envelope", out)


@pytest.mark.parametrize("suite", ["identities", "examples"])
def test_criterion_11_determinism(suite):
    a = render_report(run_suite(SuiteConfig(suite, seed=7)))
    b = render_report(run_suite(SuiteConfig(suite, seed=7)))
    ok = a == b
    prev = VERDICTS.get(11, ("byte-identical reports", True, ""))
    VERDICTS[11] = ("byte-identical reports", prev[1] and ok, (prev[2] + f" {suite}:{'same' if ok else 'differs'}").strip())
    assert ok


def verdict_lines():
    lines = []
    for num in range(1, 12):
        if num not in VERDICTS:
            continue
        title, ok, info = VERDICTS[num]
        lines.append(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {title}  ({info})")
    return lines


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
