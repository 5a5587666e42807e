"""Ring specification files.

Grammar (line oriented, ``#`` starts a comment)::

    [settings]
    n = 3
    cap = 4194304

    [ring z4]
    family = zmod
    m = 4

    [ring pair]
    family = product
    factors = z4, z4

    [ring tiny]
    family = explicit
    add = 0 1; 1 0
    mul = 0 0; 0 1

A line may also hold several ``key=value`` tokens (``family=zmod m=4``).
Lines before any header belong to an implicit ring named ``ring``.
Tables are rows separated by ``;`` with entries separated by spaces or commas.
"""
import re
from dataclasses import dataclass, field

from ..ring import RingError, build_ring

FAMILY_KEYS = {
    "zmod": {"m"},
    "trunc_poly": {"base", "k"},
    "matrix": {"base", "k"},
    "upper_triangular": {"base", "k"},
    "product": {"factors"},
    "explicit": {"add", "mul"},
}
COMMON_KEYS = {"family", "n", "cap", "ring_cap"}
SETTINGS_KEYS = {"n", "cap", "ring_cap", "seed"}
INT_KEYS = {"m", "k", "n", "cap", "ring_cap", "seed"}

_HEADER = re.compile(r"^\[\s*(ring\s+(?P<name>[A-Za-z_][\w.-]*)|(?P<settings>settings))\s*\]$")
_KEY = re.compile(r"[A-Za-z_]\w*")
_TOKEN = re.compile(r"(?P<key>[A-Za-z_]\w*)=(?P<value>\S+)")


class SpecError(RingError):
    def __init__(self, message, line=None, column=None, path=None):
        self.line, self.column, self.path = line, column, path
        where = ""
        if line is not None:
            where = f"{path or '<spec>'}:{line}:{column or 1}: "
        super().__init__(where + message)


@dataclass
class RingEntry:
    name: str
    fields: dict
    line: int
    positions: dict = field(default_factory=dict)
    ring: object = None

    @property
    def n(self):
        return self.fields.get("n")

    @property
    def cap(self):
        return self.fields.get("cap")


@dataclass
class RingSpec:
    rings: list
    settings: dict
    path: str = None

    def names(self):
        return [r.name for r in self.rings]

    def get(self, name):
        for r in self.rings:
            if r.name == name:
                return r
        raise SpecError(f"no ring named {name!r}", path=self.path)


def _parse_table(text, line, col, path):
    rows = [r.strip() for r in text.split(";")]
    table = []
    for r in rows:
        if not r:
            raise SpecError("empty table row", line, col, path)
        try:
            table.append([int(v) for v in re.split(r"[\s,]+", r)])
        except ValueError:
            raise SpecError(f"table entries must be integers: {r!r}", line, col, path) from None
    size = len(table)
    for p, row in enumerate(table):
        if len(row) != size:
            raise SpecError(f"table is not square: row {p + 1} has {len(row)} entries, expected {size}",
                            line, col, path)
    return table


def _split_assignments(body, line, offset, path):
    """``(key, value, key column, value column)`` for each assignment on one line."""
    if "=" not in body:
        raise SpecError("expected key = value", line, offset + 1, path)
    key, _, value = body.partition("=")
    if _TOKEN.search(value) and "=" in value:
        out = []
        for m in re.finditer(r"\S+", body):
            tok = _TOKEN.fullmatch(m.group())
            if tok is None:
                raise SpecError(f"malformed token {m.group()!r}", line, offset + m.start() + 1, path)
            kcol = offset + m.start() + 1
            out.append((tok.group("key"), tok.group("value"), kcol, kcol + len(tok.group("key")) + 1))
        return out
    key_stripped = key.strip()
    if not _KEY.fullmatch(key_stripped):
        raise SpecError(f"invalid key {key_stripped!r}", line, offset + 1, path)
    vcol = offset + len(key) + 2 + (len(value) - len(value.lstrip()))
    return [(key_stripped, value.strip(), offset + 1, vcol)]


def parse_ring_spec_text(text, path=None):
    rings = []
    settings = {}
    current = None
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        stripped = body.lstrip()
        if not stripped:
            continue
        offset = len(body) - len(stripped)
        if stripped.startswith("["):
            m = _HEADER.match(stripped)
            if m is None:
                raise SpecError(f"malformed section header {stripped!r}", lineno, offset + 1, path)
            if m.group("settings"):
                section, current = "settings", None
            else:
                name = m.group("name")
                if any(r.name == name for r in rings):
                    raise SpecError(f"duplicate ring name {name!r}", lineno, offset + 1, path)
                current = RingEntry(name, {}, lineno)
                rings.append(current)
                section = "ring"
            continue
        if section is None:
            current = RingEntry("ring", {}, lineno)
            rings.append(current)
            section = "ring"
        for key, value, kcol, col in _split_assignments(stripped, lineno, offset, path):
            target = settings if section == "settings" else current.fields
            allowed = SETTINGS_KEYS if section == "settings" else COMMON_KEYS | set().union(*FAMILY_KEYS.values())
            if key not in allowed:
                raise SpecError(f"unknown key {key!r}", lineno, kcol, path)
            if key in target:
                raise SpecError(f"duplicate key {key!r}", lineno, kcol, path)
            if key in INT_KEYS:
                try:
                    value = int(value)
                except ValueError:
                    raise SpecError(f"{key} must be an integer, got {value!r}", lineno, col, path) from None
            elif key in ("add", "mul"):
                value = _parse_table(value, lineno, col, path)
            elif key == "factors":
                value = [v.strip() for v in value.split(",") if v.strip()]
            target[key] = value
            if section == "ring":
                current.positions[key] = (lineno, kcol)
    if not rings:
        raise SpecError("no rings declared", path=path)
    spec = RingSpec(rings, settings, path)
    _build(spec)
    return spec


def _resolve(spec, entry, ref, key):
    line, col = entry.positions.get(key, (entry.line, 1))
    if re.fullmatch(r"\d+", ref):
        return {"family": "zmod", "m": int(ref)}
    for r in spec.rings:
        if r.name == ref:
            if r.ring is None:
                raise SpecError(f"ring {ref!r} must be declared before {entry.name!r}", line, col, spec.path)
            return r.ring
    raise SpecError(f"unknown ring {ref!r}", line, col, spec.path)


def _build(spec):
    for entry in spec.rings:
        f = entry.fields
        fam = f.get("family")
        if fam is None:
            raise SpecError(f"ring {entry.name!r} has no family", entry.line, 1, spec.path)
        if fam not in FAMILY_KEYS:
            line, col = entry.positions["family"]
            raise SpecError(f"unknown family {fam!r}", line, col, spec.path)
        extra = set(f) - COMMON_KEYS - FAMILY_KEYS[fam]
        if extra:
            key = sorted(extra)[0]
            line, col = entry.positions[key]
            raise SpecError(f"key {key!r} does not apply to family {fam!r}", line, col, spec.path)
        missing = FAMILY_KEYS[fam] - set(f)
        if missing:
            raise SpecError(f"ring {entry.name!r} is missing {sorted(missing)}", entry.line, 1, spec.path)
        desc = {"family": fam}
        for key in FAMILY_KEYS[fam]:
            desc[key] = f[key]
        if "base" in desc:
            desc["base"] = _resolve(spec, entry, str(desc["base"]), "base")
        if "factors" in desc:
            desc["factors"] = [_resolve(spec, entry, ref, "factors") for ref in desc["factors"]]
        if fam == "explicit":
            desc["name"] = entry.name
        try:
            entry.ring = build_ring(desc, cap=f.get("ring_cap", spec.settings.get("ring_cap")))
        except SpecError:
            raise
        except RingError as exc:
            raise SpecError(f"ring {entry.name!r}: {exc}", entry.line, 1, spec.path) from exc


def parse_ring_spec(path):
    with open(path, encoding="utf-8") as fh:
        return parse_ring_spec_text(fh.read(), path=str(path))
