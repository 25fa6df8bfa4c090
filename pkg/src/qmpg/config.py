"""JSON configuration for the command line tool."""

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .rootsys import CartanData, CartanError, Lattice
from .twist import Bicharacter, BicharacterError

DEFAULT_CONFIG = {
    "cartan": {"series": "A", "rank": 2},
    "lattice": "weight",
    "u": [["0", "0"], ["0", "0"]],
}

SUITES = ("hopf", "pairing", "serre", "double", "twistdouble", "modules",
          "braiding", "commutation", "kprop", "norms")


class ConfigError(ValueError):
    pass


@dataclass
class Caps:
    height: int = None
    dimension: int = 64
    grid: int = 0


@dataclass
class Config:
    cartan: CartanData
    lattice: Lattice
    bichar: Bicharacter
    symbols: tuple = ()
    caps: Caps = field(default_factory=Caps)
    suites: list = field(default_factory=list)
    raw: dict = field(default_factory=dict)


def _line_of(text, key):
    if not text:
        return None
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _fail(text, key, msg):
    line = _line_of(text, key)
    where = "line %d: " % line if line else ""
    raise ConfigError("%s%s: %s" % (where, key, msg))


def parse_entry(s, symbols):
    """'r' or 'r + r'*sym' (any rational linear form in the symbols) -> exponent tuple."""
    if isinstance(s, (int, Fraction)):
        return (Fraction(s),)
    syms = [sympy.Symbol(name) for name in symbols]
    # every identifier must be a declared symbol; this also keeps names such
    # as "beta" or "E" from resolving to sympy builtins
    idents = set(re.findall(r"[A-Za-z_][A-Za-z_0-9]*", str(s)))
    unknown = idents - set(symbols)
    if unknown:
        raise ValueError("undeclared symbol(s) %s in %r" % (sorted(unknown), s))
    local = {str(x): x for x in syms}
    try:
        expr = sympy.sympify(str(s), locals=local, rational=True)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ValueError("cannot parse %r" % s) from exc
    expr = sympy.expand(expr)
    out = []
    const = expr.subs({x: 0 for x in syms})
    if not const.is_Rational:
        raise ValueError("%r is not rational plus symbol multiples" % s)
    out.append(Fraction(int(const.p), int(const.q)))
    for x in syms:
        c = sympy.diff(expr, x)
        if c.free_symbols or not c.is_Rational:
            raise ValueError("%r is not linear in %s" % (s, x))
        out.append(Fraction(int(c.p), int(c.q)))
    while out and not out[-1]:
        out.pop()
    return tuple(out)


def parse_weight(text, n):
    parts = [p for p in str(text).replace(" ", "").split(",") if p != ""]
    if len(parts) != n:
        raise ConfigError("weight %r needs %d comma-separated coordinates" % (text, n))
    try:
        return tuple(Fraction(p) for p in parts)
    except ValueError as exc:
        raise ConfigError("weight %r: %s" % (text, exc)) from exc


def load_config(path=None, text=None):
    if path is not None:
        with open(path) as fh:
            text = fh.read()
    if text is None:
        data = json.loads(json.dumps(DEFAULT_CONFIG))
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("line %d column %d: %s" % (exc.lineno, exc.colno, exc.msg)) from exc
    if not isinstance(data, dict):
        raise ConfigError("line 1: top level must be an object")
    return build_config(data, text)


def build_config(data, text=None):
    cd = data.get("cartan")
    if not isinstance(cd, dict):
        _fail(text, "cartan", "expected {series, rank} or {matrix}")
    try:
        if "matrix" in cd:
            cartan = CartanData.build(matrix=cd["matrix"])
        else:
            cartan = CartanData.build(str(cd["series"]).upper(), int(cd["rank"]))
    except (CartanError, KeyError, ValueError, TypeError) as exc:
        _fail(text, "cartan", str(exc))
    n = cartan.n
    lat = data.get("lattice", "weight")
    try:
        if lat == "weight":
            lattice = Lattice.weight(cartan)
        elif lat == "root":
            lattice = Lattice.root(cartan)
        elif isinstance(lat, dict) and "basis" in lat:
            lattice = Lattice(cartan, lat["basis"])
        else:
            raise CartanError("expected 'weight', 'root' or {basis}")
    except (CartanError, TypeError, ValueError) as exc:
        _fail(text, "lattice", str(exc))
    symbols = tuple(data.get("symbols", ()))
    u = data.get("u")
    if u is None:
        u = [["0"] * n for _ in range(n)]
    if not isinstance(u, list) or len(u) != n or any(not isinstance(r, list) or len(r) != n for r in u):
        _fail(text, "u", "expected a %dx%d matrix of strings" % (n, n))
    try:
        U = [[parse_entry(x, symbols) for x in row] for row in u]
        bichar = Bicharacter(cartan, U, lattice, symbols)
    except (ValueError, BicharacterError) as exc:
        _fail(text, "u", str(exc))
    caps_d = data.get("caps", {}) or {}
    try:
        caps = Caps(height=caps_d.get("height"), dimension=int(caps_d.get("dimension", 64)),
                    grid=int(caps_d.get("grid", 0)))
    except (TypeError, ValueError) as exc:
        _fail(text, "caps", str(exc))
    suites = data.get("suites", [])
    for s in suites:
        if s not in SUITES and s != "all":
            _fail(text, "suites", "unknown suite %r" % s)
    return Config(cartan, lattice, bichar, symbols, caps, list(suites), data)
