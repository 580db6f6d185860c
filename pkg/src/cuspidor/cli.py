"""Batch command-line surface: JSON in, JSON out, exact numbers only.

Exit codes: 0 ok, 1 domain error, 2 usage error.  ``sweep`` runs the full
acceptance suite; CUSPIDOR_THREADS bounds its parallelism.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import acceptance
from .centralizer import centralizer, d2n_verify
from .charformula import classify_chi_data, delta_II, mod_a_data, theta_sum
from .clifford import (
    ExtensionDescriptor,
    census_summary,
    dihedral8_central_descriptor,
    dihedral8_cyclic_descriptor,
    has_multiplicity_one,
    irrep_census,
    q8_descriptor,
)
from .cocycle import (
    EtaFamily,
    NoSplitting,
    coherent_splitting,
    group_from_table,
)
from .cyclotomic import Cyc
from .dixon import restriction_multiplicities
from .errors import CuspidorError
from .exactcore import Mat, QV, RankReport
from .ffield import FiniteField, gauss_sum, normalized_gauss_value
from .fixture_gen import datum_from_json
from .rootdata import WeylElement, build_classical, table_check
from .torus import (
    AdjointModel,
    FrobeniusTorus,
    TorusCharacter,
    bicharacter,
    is_nonsingular,
    packet_counts,
    weyl_stabilizer,
)

SCHEMA = 1


def _emit(payload, audit=None):
    out = {"schema": SCHEMA, "status": "ok", "payload": payload}
    if audit is not None:
        out["audit"] = audit
    json.dump(out, sys.stdout, indent=1, sort_keys=True, default=_json_default)
    sys.stdout.write("\n")
    return 0


def _fail(message):
    json.dump({"schema": SCHEMA, "status": "error", "error": message},
              sys.stdout, indent=1)
    sys.stdout.write("\n")
    return 1


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Cyc):
        r = x.reduce()
        return {"conductor": r.n, "coeffs": [str(c) for c in r.coeffs]}
    if isinstance(x, Mat):
        return [list(r) for r in x.rows]
    if isinstance(x, QV):
        return [str(c) for c in x.coords]
    raise TypeError(f"cannot serialize {type(x)!r}")


def _load_torus(args) -> FrobeniusTorus:
    rd = build_classical(args.type, args.rank, args.lattice)
    if args.weyl == "coxeter":
        elliptic = [WeylElement(rd, m) for m in rd.weyl_group()
                    if WeylElement(rd, m).is_elliptic()]
        if not elliptic:
            raise CuspidorError("no elliptic element found")
        w = max(elliptic, key=lambda e: e.order)
    elif args.weyl == "minus-one":
        w = WeylElement(rd, -Mat.identity(rd.rank))
    else:
        w = WeylElement(rd, Mat(json.loads(args.weyl)))
    return FrobeniusTorus(rd, w, args.q)


def _character(torus, values) -> TorusCharacter:
    vals = [Fraction(v) for v in values]
    return TorusCharacter(torus, vals)


def _group_json(g):
    if isinstance(g, RankReport):
        return {"free_rank": g.free_rank, "torsion": list(g.torsion.factors)}
    return {"free_rank": 0, "invariant_factors": list(g.factors),
            "order": g.order,
            "generators": [[str(c) for c in gen.coords] for gen in g.gens]}


def cmd_table_check(args):
    report = table_check()
    payload = {"ok": report["ok"],
               "columns": {k: v for k, v in report.items() if k != "ok"}}
    return _emit(payload)


def cmd_torus(args):
    t = _load_torus(args)
    g = t.rational_points(args.degree)
    return _emit({"points": _group_json(g), "q": t.q,
                  "splitting_degree": t.splitting_degree})


def cmd_stabilizer(args):
    t = _load_torus(args)
    th = _character(t, args.theta)
    rep = weyl_stabilizer(th)
    return _emit(rep.to_json())


def cmd_bicharacter(args):
    t = _load_torus(args)
    th = _character(t, args.theta)
    rep = weyl_stabilizer(th)
    model = AdjointModel(t)
    cok = model.cokernel()
    ad_reps = {}
    for coords in model.points_ad.elements():
        cls = cok.project(coords)
        ad_reps.setdefault(cls, coords)
    table = {}
    for i, m in enumerate(rep.matrices):
        for cls, coords in sorted(ad_reps.items()):
            val = bicharacter(th, m, model.points_ad.lift(coords).coords)
            table[f"w{i}@{list(cls)}"] = val
    return _emit({"stabilizer_order": rep.order,
                  "cokernel": list(cok.group.factors), "table": table})


def cmd_packet_count(args):
    t = _load_torus(args)
    th = _character(t, args.theta)
    size, exts = packet_counts(th)
    return _emit({"packet_size": size, "extension_count": exts,
                  "nonsingular": is_nonsingular(th)})


def cmd_gauss(args):
    f = FiniteField(args.p, args.m)
    res = gauss_sum(f)
    return _emit({"q": f.q, "sum": res.sum,
                  "sum_times_conjugate": res.normalized_square,
                  "alternate_form_agrees": res.alternate_agrees,
                  "normalized_value": normalized_gauss_value(f)})


def _fixture_descriptor(name):
    fixtures = {"q8": q8_descriptor,
                "dihedral8": dihedral8_central_descriptor,
                "dihedral8-cyclic": dihedral8_cyclic_descriptor}
    if name in fixtures:
        return fixtures[name]()
    with open(name) as fh:
        return ExtensionDescriptor.from_json(json.load(fh))


def cmd_cliff(args):
    ext = _fixture_descriptor(args.fixture)
    ok, witness = has_multiplicity_one(ext)
    census = census_summary(irrep_census(ext))
    payload = {"mult_one": ok,
               "census": {str(k): v for k, v in sorted(census.items())},
               "order": ext.order()}
    if witness is not None:
        payload["witness_pair"] = [list(witness[0]), list(witness[1])]
    return _emit(payload)


def cmd_cliff_oracle(args):
    ext = _fixture_descriptor(args.fixture)
    table, mults = restriction_multiplicities(ext)
    payload = {
        "degrees": table.degrees(),
        "classes": len(table.classes),
        "restrictions": [
            {"degree": int(table.chars[i][0].rational_value()),
             "multiplicities": sorted(per.values(), reverse=True)}
            for i, per in enumerate(mults)],
    }
    return _emit(payload)


def cmd_cocycle_split(args):
    with open(args.family) as fh:
        data = json.load(fh)
    g = group_from_table(
        [tuple(e) for e in data["group"]["elements"]],
        [[tuple(x) for x in row] for row in data["group"]["table"]])
    xset = [tuple(x) for x in data["set"]["elements"]]
    act_map = {(tuple(a), tuple(u)): tuple(v)
               for a, u, v in data["set"]["action"]}
    eta_map = {(tuple(u1), tuple(u2), tuple(u3)): Fraction(v)
               for u1, u2, u3, v in data["eta"]}
    fam = EtaFamily(g, xset, lambda a, u: act_map[(a, u)],
                    lambda u1, u2, u3: eta_map.get((u1, u2, u3), 0))
    res = coherent_splitting(fam)
    if isinstance(res, NoSplitting):
        return _emit({"split": False, "certificate": {
            "kind": res.certificate["kind"],
            "detail": {k: str(v) for k, v in res.certificate.items()
                       if k != "kind"}}})
    eps = {str(k): str(v) for k, v in sorted(
        res.splittings[fam.xset[0]].items(), key=lambda kv: str(kv[0]))}
    return _emit({"split": True, "epsilon_at_base": eps})


def cmd_d2n(args):
    lens = tuple(int(x) for x in args.cycles.split(","))
    rep = d2n_verify(args.n, args.q, lens)
    return _emit({"ok": rep.ok, "commutator_trivial": rep.commutator_class_trivial,
                  "report": rep.to_json()})


def cmd_centralizer(args):
    import importlib.resources as res
    name = args.fixture
    if name in ("spin9", "biquadratic", "d4_sc"):
        data = json.loads(
            (res.files("cuspidor") / "fixtures" / f"{name}.json").read_text())
    else:
        with open(name) as fh:
            data = json.load(fh)
    datum = datum_from_json(data)
    rep = centralizer(datum)
    return _emit(rep.to_json())


def cmd_delta(args):
    t = _load_torus(args)
    th = _character(t, args.theta)
    chi = classify_chi_data(t)
    a = mod_a_data(th, chi)
    gamma = QV([Fraction(x) for x in args.gamma])
    res = delta_II(th, gamma, chi, a)
    return _emit(res.to_json(), audit={"orbits": chi.to_json(),
                                       "a_classes": a.to_json()})


def cmd_theta_sum(args):
    t = _load_torus(args)
    th = _character(t, args.theta)
    chi = classify_chi_data(t)
    a = mod_a_data(th, chi)
    gamma = QV([Fraction(x) for x in args.gamma])
    wset = [m for m in t.weyl_centralizer()]
    val = theta_sum(th, gamma, chi, a, wset)
    return _emit({"value": val, "weyl_set_size": len(wset)})


def cmd_sweep(args):
    threads = int(os.environ.get("CUSPIDOR_THREADS", "0")) or None
    results = acceptance.run_all(threads=threads, verbose=True)
    ok = all(r["ok"] for r in results)
    return 0 if ok else 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="cuspidor",
        description="exact computations for supercuspidal packet combinatorics")
    sub = parser.add_subparsers(dest="command", required=True)

    def torus_flags(p):
        p.add_argument("--type", required=True, choices="ABCD")
        p.add_argument("--rank", required=True, type=int)
        p.add_argument("--lattice", default="sc")
        p.add_argument("--weyl", default="minus-one",
                       help="coxeter | minus-one | JSON matrix")
        p.add_argument("--q", required=True, type=int)

    sub.add_parser("table-check")

    p = sub.add_parser("torus")
    torus_flags(p)
    p.add_argument("--degree", type=int, default=1)

    for name in ("stabilizer", "packet-count", "bicharacter"):
        p = sub.add_parser(name)
        torus_flags(p)
        p.add_argument("--theta", nargs="+", required=True,
                       help="values on the invariant-factor generators")

    p = sub.add_parser("gauss")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, default=1)

    for name in ("cliff", "cliff-oracle"):
        p = sub.add_parser(name)
        p.add_argument("--fixture", required=True,
                       help="q8 | dihedral8 | dihedral8-cyclic | path.json")

    p = sub.add_parser("cocycle-split")
    p.add_argument("--family", required=True, help="family JSON path")

    p = sub.add_parser("d2n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--cycles", required=True, help="comma-separated, e.g. 1,2")

    p = sub.add_parser("centralizer")
    p.add_argument("--fixture", required=True,
                   help="spin9 | biquadratic | d4_sc | path.json")

    for name in ("delta", "theta-sum"):
        p = sub.add_parser(name)
        torus_flags(p)
        p.add_argument("--theta", nargs="+", required=True)
        p.add_argument("--gamma", nargs="+", required=True)

    sub.add_parser("sweep")

    args = parser.parse_args(argv)
    handlers = {
        "table-check": cmd_table_check,
        "torus": cmd_torus,
        "stabilizer": cmd_stabilizer,
        "bicharacter": cmd_bicharacter,
        "packet-count": cmd_packet_count,
        "gauss": cmd_gauss,
        "cliff": cmd_cliff,
        "cliff-oracle": cmd_cliff_oracle,
        "cocycle-split": cmd_cocycle_split,
        "d2n": cmd_d2n,
        "centralizer": cmd_centralizer,
        "delta": cmd_delta,
        "theta-sum": cmd_theta_sum,
        "sweep": cmd_sweep,
    }
    try:
        return handlers[args.command](args)
    except CuspidorError as err:
        return _fail(f"{type(err).__name__}: {err}")


if __name__ == "__main__":
    sys.exit(main())
