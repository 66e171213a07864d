"""Instance specs and report serialization (JSON-compatible trees)."""
import json
import re

from .abelian import AbHom, FinAbGroup, Subgroup, direct_sum_group, group_from_presentation
from .errors import InfiniteQuotient, InvalidModulus, SpecError
from .modules import ModuleAction
from .rings import ScalarRing


def _locate(text, path):
    """Best-effort line/column of the last key in ``path`` inside ``text``."""
    if text is None:
        return None, None
    keys = [p for p in path if isinstance(p, str)]
    pos = 0
    for k in keys:
        m = re.compile(r'"%s"\s*:' % re.escape(k)).search(text, pos)
        if not m:
            break
        pos = m.start()
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _path_str(path):
    out = "$"
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


class _Parser:
    def __init__(self, text):
        self.text = text

    def fail(self, message, path):
        line, col = _locate(self.text, path)
        raise SpecError(message, line, col, _path_str(path))

    def int_list(self, value, path):
        if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
            self.fail("expected a list of integers", path)
        return value

    def ring(self, value, path):
        if value == "Z":
            return ScalarRing(0)
        if isinstance(value, dict) and set(value) == {"Zn"}:
            n = value["Zn"]
            if not isinstance(n, int) or isinstance(n, bool) or n < 2:
                self.fail("Zn modulus must be an integer >= 2", path + ["Zn"])
            return ScalarRing(n)
        self.fail('ring must be "Z" or {"Zn": n}', path)

    def carrier(self, value, path):
        if not isinstance(value, dict) or len(value) != 1:
            self.fail("carrier must have exactly one of invariant_factors, presentation, direct_sum", path)
        (kind, body), = value.items()
        if kind == "invariant_factors":
            orders = self.int_list(body, path + [kind])
            if any(d < 1 for d in orders):
                self.fail("cyclic orders must be positive", path + [kind])
            return FinAbGroup.of(*orders)
        if kind == "presentation":
            if not isinstance(body, list) or not body:
                self.fail("presentation must be a nonempty matrix", path + [kind])
            rows = [self.int_list(r, path + [kind, i]) for i, r in enumerate(body)]
            if len({len(r) for r in rows}) != 1:
                self.fail("presentation rows differ in length", path + [kind])
            try:
                return group_from_presentation(rows)[0]
            except InfiniteQuotient as exc:
                self.fail(str(exc), path + [kind])
        if kind == "direct_sum":
            if not isinstance(body, list) or not body:
                self.fail("direct_sum must be a nonempty list", path + [kind])
            parts = [self.carrier(p, path + [kind, i]) for i, p in enumerate(body)]
            return direct_sum_group(parts)[0]
        self.fail(f"unknown carrier kind {kind!r}", path)

    def instance(self, value, path=()):
        path = list(path)
        if not isinstance(value, dict):
            self.fail("instance must be an object", path)
        extra = set(value) - {"ring", "carrier", "label"}
        if extra:
            self.fail(f"unknown field {sorted(extra)[0]!r}", path + [sorted(extra)[0]])
        if "carrier" not in value:
            self.fail("missing field 'carrier'", path)
        ring = self.ring(value.get("ring", "Z"), path + ["ring"])
        G = self.carrier(value["carrier"], path + ["carrier"])
        label = value.get("label", "")
        if not isinstance(label, str):
            self.fail("label must be a string", path + ["label"])
        if ring.modulus and ring.modulus % G.exponent:
            self.fail(f"Z/{ring.modulus} does not act on a group of exponent {G.exponent}", path + ["ring"])
        return ModuleAction(ring, G, label=label)


def parse_spec(text):
    """Parse one instance (JSON text) into a :class:`ModuleAction`."""
    try:
        value = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(exc.msg, exc.lineno, exc.colno) from None
    try:
        return _Parser(text).instance(value)
    except InvalidModulus as exc:
        raise SpecError(str(exc)) from None


def spec_to_action(value):
    return _Parser(None).instance(value)


def ring_to_spec(ring):
    return "Z" if ring.modulus == 0 else {"Zn": ring.modulus}


def action_to_spec(a):
    """Canonical spec of a scalar-ring module (the echo used in reports)."""
    out = {"ring": ring_to_spec(a.ring), "carrier": {"invariant_factors": list(a.carrier.invariant_factors)}}
    if a.label:
        out["label"] = a.label
    return out


def group_to_json(G):
    return {"invariant_factors": list(G.invariant_factors), "order": G.order}


def hom_to_json(h):
    return {"src": list(h.src.invariant_factors), "dst": list(h.dst.invariant_factors),
            "matrix": [list(r) for r in h.matrix]}


def hom_from_json(d):
    return AbHom(FinAbGroup(tuple(d["src"])), FinAbGroup(tuple(d["dst"])), tuple(tuple(r) for r in d["matrix"]))


def subgroup_to_json(N):
    return {"order": N.order, "invariant_factors": list(N.basis_group.invariant_factors),
            "generators": [list(g) for g in N.canonical_generators]}


def subgroup_from_json(d, ambient):
    return Subgroup(ambient, [tuple(g) for g in d["generators"]])


def dumps(obj):
    """Deterministic JSON text."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
