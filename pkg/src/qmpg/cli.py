"""Command line interface: ``qmpg leaves|verify|pairing|module|ideals``."""

import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import click

from . import poisson
from .config import SUITES, ConfigError, load_config, parse_weight
from .double import set_default_pairing
from .qpair import HeightCapExceeded, RTPairing, gram
from .repfun import HWModule, ModuleError, ideal_generators
from .rootsys import WeylGroup
from .scalars import Scalar
from .suites import SuiteContext, run_suite

CACHE_VERSION = 1


# --------------------------------------------------------------------- tables

class Table:
    def __init__(self, title, columns, rows=None, meta=None):
        self.title = title
        self.columns = list(columns)
        self.rows = [list(r) for r in (rows or [])]
        self.meta = dict(meta or {})

    def to_obj(self):
        return {"title": self.title, "meta": self.meta, "columns": self.columns, "rows": self.rows}


def render_tables(tables, fmt):
    if fmt == "json":
        return json.dumps([t.to_obj() for t in tables], indent=2, sort_keys=True) + "\n"
    out = io.StringIO()
    for k, t in enumerate(tables):
        if k:
            out.write("\n")
        if fmt == "csv":
            out.write("# %s\n" % t.title)
            for key in sorted(t.meta):
                out.write("# %s: %s\n" % (key, t.meta[key]))
            w = csv.writer(out, lineterminator="\n")
            w.writerow(t.columns)
            w.writerows(t.rows)
        else:
            out.write("== %s ==\n" % t.title)
            for key in sorted(t.meta):
                out.write("%s: %s\n" % (key, t.meta[key]))
            if t.columns:
                widths = [len(c) for c in t.columns]
                for r in t.rows:
                    for i, x in enumerate(r):
                        widths[i] = max(widths[i], len(str(x)))
                out.write("  ".join(c.ljust(widths[i]) for i, c in enumerate(t.columns)).rstrip() + "\n")
                for r in t.rows:
                    out.write("  ".join(str(x).ljust(widths[i]) for i, x in enumerate(r)).rstrip() + "\n")
    return out.getvalue()


# ---------------------------------------------------------------------- cache

def load_cache(path, pairing):
    """Import memo entries for this Cartan datum; stale or corrupt files are ignored."""
    if not path or not os.path.exists(path):
        return 0
    key = pairing.cartan.key
    entries = {}
    try:
        with open(path) as fh:
            head = json.loads(fh.readline())
            if head.get("version") != CACHE_VERSION:
                click.echo("warning: cache %s has version %r, ignoring it" % (path, head.get("version")), err=True)
                return 0
            for line in fh:
                rec = json.loads(line)
                if rec["c"] != key or rec["o"] != pairing.orientation:
                    continue
                entries[(tuple(rec["e"]), tuple(rec["f"]))] = Scalar.from_json(rec["v"])
    except (ValueError, KeyError, TypeError, AttributeError):
        click.echo("warning: cache %s is corrupt, recomputing" % path, err=True)
        return 0
    pairing.import_memo(entries)
    return len(entries)


def store_cache(path, pairing):
    if not path:
        return
    keep = []
    if os.path.exists(path):
        try:
            with open(path) as fh:
                head = json.loads(fh.readline())
                if head.get("version") == CACHE_VERSION:
                    for line in fh:
                        rec = json.loads(line)
                        if rec["c"] != pairing.cartan.key or rec["o"] != pairing.orientation:
                            keep.append(line.rstrip("\n"))
        except (ValueError, KeyError, TypeError, AttributeError):
            keep = []
    lines = []
    for (ew, fw), v in pairing.export_memo().items():
        lines.append(json.dumps({"c": pairing.cartan.key, "o": pairing.orientation, "e": list(ew),
                                 "f": list(fw), "v": v.to_json()}, sort_keys=True))
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(json.dumps({"version": CACHE_VERSION}) + "\n")
        for line in sorted(keep + lines):
            fh.write(line + "\n")
    os.replace(tmp, path)


# ------------------------------------------------------------------- commands

class State:
    def __init__(self, config, fmt, cache, jobs):
        self.config = config
        self.fmt = fmt
        self.cache = cache
        self.jobs = jobs
        self.pairing = RTPairing(config.cartan)
        set_default_pairing(self.pairing)
        load_cache(cache, self.pairing)

    def finish(self, tables, failed=False):
        click.echo(render_tables(tables, self.fmt), nl=False)
        store_cache(self.cache, self.pairing)
        click.echo("pairing recursions: %d" % self.pairing.recursions, err=True)
        sys.exit(1 if failed else 0)


def _header(config):
    return {
        "cartan": config.cartan.name or config.cartan.key,
        "lattice": config.lattice.name,
        "U": "; ".join(",".join(r) for r in config.bichar.render_matrix(config.bichar.U)),
    }


@click.group()
def main():
    """Quantum groups twisted by a bicharacter: verification and tables."""


def common(f):
    f = click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                     help="JSON configuration file.")(f)
    f = click.option("--format", "fmt", type=click.Choice(["text", "csv", "json"]), default="text")(f)
    f = click.option("--cache", type=click.Path(dir_okay=False), default=None,
                     help="Pairing cache file (default: $QMPG_CACHE).")(f)
    f = click.option("--height-cap", type=int, default=None)(f)
    f = click.option("--jobs", type=int, default=1)(f)
    return f


def _state(config_path, fmt, cache, height_cap, jobs):
    try:
        config = load_config(config_path)
    except ConfigError as exc:
        raise click.ClickException("invalid config: %s" % exc)
    if height_cap is not None:
        config.caps.height = height_cap
    if cache is None:
        cache = os.environ.get("QMPG_CACHE") or None
    return State(config, fmt, cache, max(1, jobs))


def _pmap(state, fn, items):
    if state.jobs > 1:
        with ThreadPoolExecutor(state.jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


@main.command()
@common
def leaves(config_path, fmt, cache, height_cap, jobs):
    """Leaf dimensions, orbit ranks and Z_w data over W x W."""
    st = _state(config_path, fmt, cache, height_cap, jobs)
    cfg = st.config
    ctx = poisson.PoissonContext(cfg.cartan, cfg.bichar, cfg.lattice)
    alg = poisson.is_algebraic(ctx)
    meta = _header(cfg)
    if alg.algebraic:
        meta["algebraicity"] = "algebraic, m = %d" % alg.m
    else:
        i, j = alg.offending
        meta["algebraicity"] = "non-algebraic (u irrational at (%d,%d))" % (i + 1, j + 1)
    ws = poisson.weyl_sorted(ctx)
    pairs = [(a, b) for a in ws for b in ws]

    def row(w):
        s = poisson.s_of_w(ctx, w)
        l = w[0].length + w[1].length
        r = [w[0].label(), w[1].label(), l, s, l + s, ctx.n - s]
        if alg.algebraic:
            zw, lat = poisson.zw_data(ctx, w)
            r += [zw, lat]
        return [str(x) for x in r]

    cols = ["w+", "w-", "l", "s", "leaf_dim", "orbit_rank"]
    if alg.algebraic:
        cols += ["zw_dim", "lattice_rank"]
    t = Table("symplectic leaves", cols, _pmap(st, row, pairs), meta)
    st.finish([t])


@main.command()
@common
@click.option("--suite", "suite", default=None, help="Comma-separated suites, or 'all'.")
def verify(config_path, fmt, cache, height_cap, jobs, suite):
    """Run verification suites; exit status is nonzero iff a check fails."""
    st = _state(config_path, fmt, cache, height_cap, jobs)
    names = [s.strip() for s in suite.split(",")] if suite else (st.config.suites or ["all"])
    if "all" in names:
        names = list(SUITES)
    for s in names:
        if s not in SUITES:
            raise click.ClickException("unknown suite %r (choose from %s, all)" % (s, ", ".join(SUITES)))
    ctx = SuiteContext(st.config, st.pairing)
    results = _pmap(st, lambda s: run_suite(s, ctx), names)
    rows = []
    failed = False
    for checks in results:
        for ch in checks:
            failed |= not ch.ok
            rows.append([ch.suite, ch.name, "PASS" if ch.ok else "FAIL", " | ".join(ch.lines)])
    meta = _header(st.config)
    meta["result"] = "FAIL" if failed else "PASS"
    st.finish([Table("verification", ["suite", "check", "status", "detail"], rows, meta)], failed)


@main.command()
@common
@click.argument("beta")
def pairing(config_path, fmt, cache, height_cap, jobs, beta):
    """Gram block of the pairing at BETA (root coordinates, e.g. 1,1)."""
    st = _state(config_path, fmt, cache, height_cap, jobs)
    c = st.config.cartan
    b = tuple(int(x) for x in parse_weight(beta, c.n))
    try:
        blk = gram(st.pairing, b, st.config.caps.height)
    except HeightCapExceeded as exc:
        raise click.ClickException(str(exc))
    word = lambda w: "".join("f%d" % (i + 1) for i in w)
    rows = [["".join("e%d" % (i + 1) for i in r)] + [x.render() for x in blk.matrix[k]]
            for k, r in enumerate(blk.rows)]
    meta = _header(st.config)
    meta.update({"beta": beta, "rank": str(blk.rank), "words": str(len(blk.rows))})
    tables = [Table("gram block", ["row"] + [word(w) for w in blk.cols], rows, meta)]
    rad = [["".join("e%d" % (i + 1) for i in blk.rows[k]) for k in range(len(blk.rows))]]
    rad += [[x.render() for x in v] for v in blk.radical]
    tables.append(Table("radical basis", rad[0], rad[1:]))
    st.finish(tables)


@main.command()
@common
@click.argument("weight")
def module(config_path, fmt, cache, height_cap, jobs, weight):
    """The simple module with highest weight WEIGHT (weight coordinates)."""
    st = _state(config_path, fmt, cache, height_cap, jobs)
    c = st.config.cartan
    lam = parse_weight(weight, c.n)
    try:
        m = HWModule(c, lam, st.config.lattice, st.config.caps.dimension)
    except ModuleError as exc:
        raise click.ClickException(str(exc))
    meta = _header(st.config)
    meta.update({"highest weight": weight, "dimension": str(m.dim)})
    rows = [[str(k), ",".join(str(x) for x in m.weights[k]),
             "".join("f%d" % (i + 1) for i in m.pedigree[k]) or "v"] for k in range(m.dim)]
    tables = [Table("basis", ["index", "weight", "pedigree"], rows, meta)]
    act = []
    for kind, mats in (("e", m.E), ("f", m.F)):
        for i in range(c.n):
            for col in sorted(mats[i]):
                for row_, x in sorted(mats[i][col].items()):
                    act.append(["%s%d" % (kind, i + 1), str(col), str(row_), x.render()])
    tables.append(Table("action", ["generator", "from", "to", "coefficient"], act))
    st.finish(tables)


@main.command()
@common
@click.argument("w")
@click.argument("weight")
def ideals(config_path, fmt, cache, height_cap, jobs, w, weight):
    """Generators of I+_{w+} and I-_{w-} in C(WEIGHT); W is 'w+|w-'."""
    st = _state(config_path, fmt, cache, height_cap, jobs)
    c = st.config.cartan
    W = WeylGroup(c)
    try:
        wp, wm = (W.parse(x) for x in w.split("|"))
    except ValueError as exc:
        raise click.ClickException("bad Weyl pair %r: %s" % (w, exc))
    lam = parse_weight(weight, c.n)
    try:
        m = HWModule(c, lam, st.config.lattice, st.config.caps.dimension)
    except ModuleError as exc:
        raise click.ClickException(str(exc))
    data = ideal_generators(m, W, wp, wm)
    meta = _header(st.config)
    meta.update({"w": "%s|%s" % (wp.label(), wm.label()), "highest weight": weight,
                 "I+ generators": str(len(data.plus)), "I- generators": str(len(data.minus))})

    def fmt_vec(v):
        return " + ".join("(%s)*f%d" % (x.render(), k) for k, x in sorted(v.items()))

    rows = [["I+", str(k), fmt_vec(v), "v_top"] for k, v in enumerate(data.plus)]
    rows += [["I-", str(k), fmt_vec(v), "v_bottom"] for k, v in enumerate(data.minus)]
    st.finish([Table("ideal generators c_{f,v}", ["ideal", "index", "f", "v"], rows, meta)])


if __name__ == "__main__":
    main()
