"""Command-line front end.

Subcommands: verify | realize | even | jstruct | action | teich | platonic.
Input is a JSON document (--input PATH or - for stdin); rationals travel as
strings "p/q", complex numbers as ["re", "im"] pairs.  Reports are emitted
as text or as canonical JSON (sorted keys), so identical input and seed
produce byte-identical output.  Exit codes: 0 success, 1 invalid input,
2 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import crystal, hodge, orbpi, quotient
from .crystal import CrystData, NotFinite
from .exactla import IntMatrix
from .groupcore import DEFAULT_ORDER_BOUND, ExceedsBound

F = Fraction

COMMANDS = ("verify", "realize", "even", "jstruct", "action", "teich", "platonic")


class ValidationError(Exception):
    """Bad input; the message carries the JSON path of the offense."""


@dataclass(frozen=True)
class JobSpec:
    """One validated CLI job: command, parsed document, output format, and
    the effective seed/bound/precision (flags override document options)."""

    command: str
    document: dict
    output_format: str
    seed: int
    bound: int
    precision: int

    @staticmethod
    def build(command, document, output_format, seed=None, bound=None,
              precision=None):
        _check_document(document)
        options = document.get("options", {})
        default_bound = 10000 if command == "platonic" else DEFAULT_ORDER_BOUND
        return JobSpec(
            command=command,
            document=document,
            output_format=output_format,
            seed=seed if seed is not None else options.get("seed", 0),
            bound=bound if bound is not None else options.get("bound", default_bound),
            precision=precision if precision is not None
                      else options.get("precision", hodge.DEFAULT_PRECISION),
        )

    def run(self):
        opts = {"seed": self.seed, "bound": self.bound, "precision": self.precision}
        result = _HANDLERS[self.command](self.document, opts)
        return {"command": self.command, "options": opts, "result": result}


# ---------------------------------------------------------------------------
# parsing and validation

_TOP_KEYS = {"rank", "generators", "omega", "cocycle", "triple",
             "presentation", "loops", "multiplicities", "options"}
_GEN_KEYS = {"linear", "translation"}
_OPTION_KEYS = {"seed", "bound", "precision"}


def _fail(path, message):
    raise ValidationError(f"{path}: {message}")


def parse_rational(value, path):
    if isinstance(value, int):
        return F(value)
    if isinstance(value, str):
        try:
            return F(value)
        except (ValueError, ZeroDivisionError):
            _fail(path, f"not a rational number: {value!r}")
    _fail(path, "rationals must be integers or 'p/q' strings")


def _check_document(doc, path="input"):
    if not isinstance(doc, dict):
        _fail(path, "document must be a JSON object")
    for key in doc:
        if key not in _TOP_KEYS:
            _fail(f"{path}.{key}", "unknown field")
    options = doc.get("options", {})
    if not isinstance(options, dict):
        _fail(f"{path}.options", "must be an object")
    for key in options:
        if key not in _OPTION_KEYS:
            _fail(f"{path}.options.{key}", "unknown option")
        if not isinstance(options[key], int):
            _fail(f"{path}.options.{key}", "must be an integer")


def parse_cryst_data(doc, path="input") -> CrystData:
    if "rank" not in doc:
        _fail(f"{path}.rank", "missing")
    rank = doc["rank"]
    if not isinstance(rank, int) or rank < 1:
        _fail(f"{path}.rank", "must be a positive integer")
    gens = doc.get("generators", [])
    if not isinstance(gens, list):
        _fail(f"{path}.generators", "must be a list")
    parsed = []
    for gi, g in enumerate(gens):
        gpath = f"{path}.generators[{gi}]"
        if not isinstance(g, dict):
            _fail(gpath, "must be an object")
        for key in g:
            if key not in _GEN_KEYS:
                _fail(f"{gpath}.{key}", "unknown field")
        lin = g.get("linear")
        if not (isinstance(lin, list) and len(lin) == rank and
                all(isinstance(row, list) and len(row) == rank for row in lin)):
            _fail(f"{gpath}.linear", f"must be a {rank}x{rank} integer matrix")
        for i, row in enumerate(lin):
            for j, x in enumerate(row):
                if not isinstance(x, int):
                    _fail(f"{gpath}.linear[{i}][{j}]", "must be an integer")
        trans = g.get("translation", ["0"] * rank)
        if not (isinstance(trans, list) and len(trans) == rank):
            _fail(f"{gpath}.translation", f"must have {rank} entries")
        tvec = tuple(parse_rational(x, f"{gpath}.translation[{i}]")
                     for i, x in enumerate(trans))
        parsed.append((IntMatrix.from_rows(lin), tvec))
    return CrystData.make(rank, parsed)


def parse_omega(doc, path="input.omega"):
    om = doc["omega"]
    if not (isinstance(om, list) and om and all(isinstance(r, list) for r in om)):
        _fail(path, "must be a nonempty list of rows")
    rows = len(om)
    cols = len(om[0])
    if rows != 2 * cols:
        _fail(path, f"must have shape 2n x n, got {rows}x{cols}")
    pairs = []
    for i, row in enumerate(om):
        if len(row) != cols:
            _fail(f"{path}[{i}]", "ragged row")
        prow = []
        for j, z in enumerate(row):
            zpath = f"{path}[{i}][{j}]"
            if not (isinstance(z, list) and len(z) == 2):
                _fail(zpath, "complex entries are [re, im] pairs")
            prow.append((parse_rational(z[0], zpath), parse_rational(z[1], zpath)))
        pairs.append(prow)
    return hodge.OmegaMatrix.exact(pairs)


def _build_group(data: CrystData, bound):
    """Verify, falling back to lattice normalization for pure translations."""
    try:
        group = crystal.verify_crystallographic(data, bound=bound)
        return group, None
    except crystal.KernelTooBig:
        res = crystal.normalize_action(data, bound=bound)
        return res.group, res


# ---------------------------------------------------------------------------
# serialization

def frac_str(x):
    return str(F(x))


def vec_str(v):
    return [frac_str(x) for x in v]


def mat_str(rows):
    return [[frac_str(x) for x in row] for row in rows]


def _decimals_for(precision_bits):
    return max(6, int(precision_bits * 0.30103) - 2)


def mpf_str(x, precision_bits):
    return mpmath.nstr(x, _decimals_for(precision_bits), strip_zeros=False)


def structure_report(structure, witness):
    if structure is None:
        return {"exists": False, "witness": list(witness)}
    out = {"exists": True, "mode": structure.mode,
           "precision_bits": structure.precision_bits}
    if structure.mode == "exact":
        out["matrix"] = mat_str(structure.entries)
        out["j_squared_residual"] = "0"
        out["commutator_residual"] = "0"
    else:
        bits = structure.precision_bits
        out["matrix"] = [[mpf_str(x, bits) for x in row] for row in structure.entries]
        out["j_squared_residual"] = mpf_str(structure.j_squared_residual, bits)
        out["commutator_residual"] = mpf_str(structure.commutator_residual, bits)
    return out


def isotypic_report(report):
    return [
        {
            "labels": list(c.labels),
            "type": c.fs_type,
            "degree": c.degree,
            "multiplicity": c.multiplicity,
            "complex_dim": c.complex_dim,
            "parity": "even" if c.admits_complex_structure else "odd",
        }
        for c in report.classes
    ]


def group_report(group, normalization):
    out = {
        "rank": group.rank,
        "order": group.order(),
        "elements": [
            {"linear": group.linear(i).to_lists(), "translation": vec_str(group.u(i))}
            for i in range(group.order())
        ],
    }
    if normalization is not None and normalization.changed:
        out["normalized"] = True
        out["notice"] = ("pure translations outside the lattice were absorbed; "
                         "coordinates were rebased")
        out["basis_change"] = mat_str(normalization.basis_change.to_lists())
        out["absorbed_translations"] = [vec_str(t) for t in normalization.absorbed]
    else:
        out["normalized"] = False
    return out


# ---------------------------------------------------------------------------
# command handlers (each returns the result dict)

def cmd_verify(doc, opts):
    data = parse_cryst_data(doc)
    group, normalization = _build_group(data, opts["bound"])
    torsion = crystal.is_torsion_free(group)
    out = group_report(group, normalization)
    out["torsion_free"] = torsion.torsion_free
    out["torsion_witnesses"] = list(torsion.offenders)
    return out


def cmd_realize(doc, opts):
    data = parse_cryst_data(doc)
    group, normalization = _build_group(data, opts["bound"])
    vs = group.vector_system
    if "cocycle" in doc:
        f = _parse_cocycle(doc, group)
    else:
        f = crystal.cocycle_from_system(vs)
    averaged = crystal.affine_realization(group.group, f)
    eq = crystal.realizations_equivalent(vs, averaged)
    return {
        "input_system": [vec_str(u) for u in vs.translations],
        "averaged_system": [vec_str(u) for u in averaged.translations],
        "cocycle_consistent": averaged.is_consistent(),
        "equivalent": eq.equivalent,
        "shift_witness": vec_str(eq.shift) if eq.equivalent else None,
        "normalized": bool(normalization and normalization.changed),
    }


def _parse_cocycle(doc, group):
    entries = doc["cocycle"]
    path = "input.cocycle"
    if not isinstance(entries, list):
        _fail(path, "must be a list of [g, h, vector] triples")
    values = {}
    n = group.order()
    for k, item in enumerate(entries):
        ipath = f"{path}[{k}]"
        if not (isinstance(item, list) and len(item) == 3):
            _fail(ipath, "must be [g, h, vector]")
        g, h, vec = item
        if not (isinstance(g, int) and isinstance(h, int)
                and 0 <= g < n and 0 <= h < n):
            _fail(ipath, f"element indices must lie in [0, {n})")
        if not (isinstance(vec, list) and len(vec) == group.rank
                and all(isinstance(x, int) for x in vec)):
            _fail(ipath, "cocycle values are integer vectors of lattice rank")
        values[(g, h)] = tuple(vec)
    for g in range(n):
        for h in range(n):
            values.setdefault((g, h), tuple([0] * group.rank))
    return crystal.ExtensionCocycle(group.group, values)


def cmd_even(doc, opts):
    data = parse_cryst_data(doc)
    group, normalization = _build_group(data, opts["bound"])
    ev = hodge.is_even(group)
    return {
        "even": ev.even,
        "rank": group.rank,
        "classes": isotypic_report(ev.report),
        "odd_witness": list(ev.odd_witness),
        "normalized": bool(normalization and normalization.changed),
    }


def cmd_jstruct(doc, opts):
    data = parse_cryst_data(doc)
    group, _ = _build_group(data, opts["bound"])
    res = hodge.invariant_complex_structure(
        group, seed=opts["seed"], precision=opts["precision"])
    out = structure_report(res.structure, res.evenness.odd_witness)
    out["even"] = res.evenness.even
    return out


def cmd_action(doc, opts):
    data = parse_cryst_data(doc)
    group, _ = _build_group(data, opts["bound"])
    ev = hodge.is_even(group)
    if not ev.even:
        raise ValidationError(
            "input.generators: the action admits no invariant complex "
            f"structure (odd classes: {', '.join(ev.odd_witness)}); "
            "the complex classification is undefined")
    cls = quotient.classify_action(group)
    refl = quotient.pseudoreflections(group)
    fact = quotient.factorization_report(group)
    desc = quotient.orbifold_descriptor(group)
    return {
        "classification": cls.kind,
        "evidence": [list(e) for e in cls.evidence],
        "pseudoreflections": list(refl),
        "gpr_order": fact.gpr_order,
        "gpr_index": fact.index,
        "quasi_etale_certified": fact.quasi_etale,
        "factorization_audit": [list(a) for a in fact.audit],
        "divisor_classes": [
            {
                "multiplicity": c.multiplicity,
                "orbit_size": c.orbit_size,
                "base_point": vec_str(c.representative.base),
                "directions": [list(b) for b in c.representative.basis],
            }
            for c in desc.divisor_classes
        ],
        "stratum_summary": [
            {"complex_codim": key[0], "stabilizer_order": key[1], "count": count}
            for key, count in desc.stratum_summary
        ],
    }


def cmd_teich(doc, opts):
    data = parse_cryst_data(doc)
    group, _ = _build_group(data, opts["bound"])
    ev = hodge.is_even(group)
    out = {"even": ev.even}
    if "omega" in doc:
        om = parse_omega(doc)
        if om.rows != group.rank:
            _fail("input.omega", f"row count must equal the rank {group.rank}")
        try:
            out["omega_in_parameter_space"] = hodge.omega_in_T(om)
        except hodge.DegenerateOmega:
            out["omega_in_parameter_space"] = None
            out["omega_degenerate"] = True
    if not ev.even:
        out["types"] = []
        out["odd_witness"] = list(ev.odd_witness)
        return out
    types = hodge.hodge_types(group)
    rows = []
    for t in types:
        entry = {
            "splits": [
                {"labels": list(s.labels), "type": s.fs_type,
                 "d_chi": s.dims[0], "d_chibar": s.dims[1]}
                for s in t.splits
            ],
            "dimension": hodge.component_dimension(t, group),
        }
        try:
            B = hodge.sample_subspace(group, t, seed=opts["seed"])
            entry["tangent_dimension"] = hodge.tangent_dimension(group, B)
            entry["tangent_agrees"] = entry["tangent_dimension"] == entry["dimension"]
        except ValueError:
            entry["tangent_dimension"] = None
            entry["tangent_agrees"] = None
        rows.append(entry)
    out["types"] = rows
    out["count"] = len(rows)
    return out


_PLATONIC_CLASSES = {
    (2, 3, 3): "tetrahedral family",
    (2, 3, 4): "octahedral family",
    (2, 3, 5): "icosahedral family",
}


def cmd_platonic(doc, opts):
    if "triple" in doc:
        triple = doc["triple"]
        if not (isinstance(triple, list) and len(triple) == 3
                and all(isinstance(m, int) for m in triple)):
            _fail("input.triple", "must be three integers")
        if min(triple) < 2:
            _fail("input.triple", "multiplicities must be >= 2")
        finite = orbpi.platonic_check(*triple)
        order = orbpi.coset_enumerate(
            orbpi.central_line_quotient(*triple), bound=opts["bound"])
        key = tuple(sorted(triple))
        if key[:2] == (2, 2):
            family = "dihedral family (2,2,n)"
        else:
            family = _PLATONIC_CLASSES.get(key)
        return {
            "triple": list(triple),
            "finite": finite,
            "class": family,
            "quotient_order": order,
            "enumeration_agrees": (order is not None) == finite,
        }
    if "presentation" in doc:
        p = _parse_presentation(doc["presentation"])
        if "loops" in doc or "multiplicities" in doc:
            loops = doc.get("loops", [])
            mults = doc.get("multiplicities", [])
            loops = [tuple(int(x) for x in w) for w in loops]
            p = orbpi.orbifold_quotient(p, loops, mults)
        order = orbpi.coset_enumerate(p, bound=opts["bound"])
        return {
            "generators": list(p.generators),
            "relators": [list(w) for w in p.relators],
            "order": order,
            "verdict": "finite" if order is not None else "unknown",
        }
    _fail("input", "platonic needs either a 'triple' or a 'presentation'")


def _parse_presentation(raw, path="input.presentation"):
    if not isinstance(raw, dict):
        _fail(path, "must be an object with generators and relators")
    gens = raw.get("generators")
    rels = raw.get("relators", [])
    if not (isinstance(gens, list) and all(isinstance(g, str) for g in gens)):
        _fail(f"{path}.generators", "must be a list of names")
    if not isinstance(rels, list):
        _fail(f"{path}.relators", "must be a list of words")
    words = []
    for i, w in enumerate(rels):
        if not (isinstance(w, list) and all(isinstance(x, int) for x in w)):
            _fail(f"{path}.relators[{i}]", "words are lists of signed indices")
        words.append(tuple(w))
    try:
        return orbpi.Presentation.make(gens, words)
    except ValueError as exc:
        _fail(f"{path}.relators", str(exc))


_HANDLERS = {
    "verify": cmd_verify,
    "realize": cmd_realize,
    "even": cmd_even,
    "jstruct": cmd_jstruct,
    "action": cmd_action,
    "teich": cmd_teich,
    "platonic": cmd_platonic,
}

# minimal output schema: required keys per command, used by tests and
# round-trip validation
REPORT_KEYS = {
    "verify": {"rank", "order", "elements", "torsion_free"},
    "realize": {"input_system", "averaged_system", "equivalent"},
    "even": {"even", "classes"},
    "jstruct": {"exists"},
    "action": {"classification", "divisor_classes", "stratum_summary"},
    "teich": {"even", "types"},
    "platonic": set(),
}


def validate_report(command, report):
    if not isinstance(report, dict) or "command" not in report or "result" not in report:
        raise ValueError("report must carry command and result")
    if report["command"] != command:
        raise ValueError("report command mismatch")
    missing = REPORT_KEYS[command] - set(report["result"])
    if missing:
        raise ValueError(f"report missing keys: {sorted(missing)}")
    return True


def _render_text(report, out):
    def walk(value, indent=0):
        pad = "  " * indent
        if isinstance(value, dict):
            for k in sorted(value):
                v = value[k]
                if isinstance(v, (dict, list)):
                    out.write(f"{pad}{k}:\n")
                    walk(v, indent + 1)
                else:
                    out.write(f"{pad}{k}: {v}\n")
        elif isinstance(value, list):
            for v in value:
                if isinstance(v, (dict, list)):
                    out.write(f"{pad}-\n")
                    walk(v, indent + 1)
                else:
                    out.write(f"{pad}- {v}\n")
        else:
            out.write(f"{pad}{value}\n")

    out.write(f"{report['command']}:\n")
    walk(report["result"], 1)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="crystorb",
        description="exact computations with crystallographic groups and "
                    "finite group actions on complex tori")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", required=True,
                       help="path to a JSON input document, or - for stdin")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--bound", type=int, default=None)
        p.add_argument("--precision", type=int, default=None)
    args = parser.parse_args(argv)

    try:
        if args.input == "-":
            raw = sys.stdin.read()
        else:
            with open(args.input, "r", encoding="utf-8") as fh:
                raw = fh.read()
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"input: invalid JSON ({exc})") from exc
        job = JobSpec.build(args.command, doc, args.format,
                            seed=args.seed, bound=args.bound,
                            precision=args.precision)
        report = job.run()
        if job.output_format == "json":
            sys.stdout.write(json.dumps(report, sort_keys=True,
                                        separators=(",", ":")) + "\n")
        else:
            _render_text(report, sys.stdout)
        return 0
    except (ValidationError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (NotFinite, ExceedsBound, crystal.CocycleViolation, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except Exception as exc:   # internal failure
        sys.stderr.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
