"""Report files: pipeline output plus certificates that re-check without the pipeline."""
from __future__ import annotations

from .errors import ApproxGroupError
from .groups import Automorphism, FiniteGroup, GroupSubset, apply_automorphism, set_product
from .instance import Instance
from .pipeline import PipelineResult


class ReportInvalid(ApproxGroupError):
    pass


def _records(records) -> list[dict]:
    return [
        {
            "index_set": list(r.index_set),
            "k_z": r.k_z,
            "eta": list(r.eta),
            "n_set": r.n_set.members(),
        }
        for r in records
    ]


def _set_certificate(dbl, comm) -> dict:
    return {
        "doubling_k": dbl.doubling_k,
        "doubling_witness": dbl.doubling_witness.members(),
        "members": [{"n": c.n, "z0": c.z0.members(), "z1": c.z1.members()} for c in comm],
    }


def build_report(
    instance: Instance,
    res: PipelineResult,
    lemmas: dict | None = None,
    oracle: dict | None = None,
    status: str = "ok",
    timing: float | None = None,
) -> dict:
    f = res.family
    report = {
        "instance_digest": instance.digest(),
        "status": status,
        "family": {
            "K": f.k_uniform,
            "N": f.n_uniform,
            "members": [
                {"doubling_k": m.doubling_k, "doubling_witness": m.doubling_witness.members()} for m in f.members
            ],
        },
        "squared_family": {"K": res.squared.k_uniform, "N": res.squared.n_uniform},
        "pipeline": {
            "m": res.m,
            "k0": res.k0,
            "n0": res.n0,
            "m_prime": res.m_prime,
            "n2": res.n2,
            "N_Z": res.n_z,
            "N_Z_chain": res.n_z_chain,
            "N_Y": res.n_y,
        },
        "strong": _records(res.strong_records),
        "i_family": [list(r.index_set) for r in res.i_family],
        "i_prime": [list(r.index_set) for r in res.i_prime],
        "i_mprime": [list(r.index_set) for r in res.i_mprime],
        "y_prime": [list(r.index_set) for r in res.y_prime],
        "h": res.h.members(),
        "h_prime": res.h_prime.members(),
        "certificates": {
            "h": _set_certificate(res.h_doubling, res.h_commensurability),
            "h_prime": _set_certificate(res.h_prime_doubling, res.h_prime_commensurability),
        },
        "invariance": [
            {
                "automorphism": list(v.automorphism),
                "stabilizing": v.stabilizing,
                "h": v.h_invariant,
                "h_prime": v.h_prime_invariant,
            }
            for v in res.invariance
        ],
        "lemmas": lemmas,
        "oracle": oracle,
    }
    if timing is not None:
        report["timing_seconds"] = round(timing, 3)
    return report


def _fail(message: str):
    raise ReportInvalid(message)


def _check_set(g: FiniteGroup, name: str, members: list[int], cert: dict, carriers: list[GroupSubset]) -> None:
    s = g.subset(members)
    if not s.has_identity() or not s.is_symmetric():
        _fail(f"{name} is not symmetric with identity")
    w = g.subset(cert["doubling_witness"])
    if len(w) != cert["doubling_k"] or not set_product(s, s) <= set_product(w, s):
        _fail(f"{name} doubling certificate does not hold")
    if len(cert["members"]) != len(carriers):
        _fail(f"{name} has {len(cert['members'])} commensurability certificates for {len(carriers)} members")
    for i, (c, x) in enumerate(zip(cert["members"], carriers)):
        z0, z1 = g.subset(c["z0"]), g.subset(c["z1"])
        if not s <= set_product(z0, x) or not x <= set_product(z1, s):
            _fail(f"{name} commensurability certificate against member {i} does not hold")
        if c["n"] != max(len(z0), len(z1)):
            _fail(f"{name} commensurability constant against member {i} is misreported")


def verify_report(instance: Instance, report: dict) -> bool:
    """Re-check every certificate in ``report`` against ``instance`` alone."""
    if report["instance_digest"] != instance.digest():
        _fail("report belongs to a different instance")
    g, carriers = instance.materialize()
    fam = report["family"]
    for i, (m, x) in enumerate(zip(fam["members"], carriers)):
        w = g.subset(m["doubling_witness"])
        if len(w) != m["doubling_k"] or not set_product(x, x) <= set_product(w, x):
            _fail(f"doubling certificate of member {i} does not hold")
    if fam["K"] != max(m["doubling_k"] for m in fam["members"]):
        _fail("family K is misreported")
    _check_set(g, "h", report["h"], report["certificates"]["h"], carriers)
    _check_set(g, "h_prime", report["h_prime"], report["certificates"]["h_prime"], carriers)
    h, hp = g.subset(report["h"]), g.subset(report["h_prime"])
    if not hp <= h:
        _fail("h_prime is not contained in h")
    family_bits = {x.bits for x in carriers}
    for v in report["invariance"]:
        phi = Automorphism(g, tuple(v["automorphism"]))
        stab = {apply_automorphism(phi, x).bits for x in carriers} == family_bits
        if stab != v["stabilizing"]:
            _fail(f"stabilizing flag wrong for {v['automorphism']}")
        if stab and (
            (apply_automorphism(phi, h) == h) != v["h"] or (apply_automorphism(phi, hp) == hp) != v["h_prime"]
        ):
            _fail(f"invariance verdict wrong for {v['automorphism']}")
    return True
