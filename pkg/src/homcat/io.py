"""JSON input formats.

Matrices: ``{"matrix": [[...], ...]}``.

Abelian groups: ``{"abgroup": {"invariants": [2, 0]}}`` (``0`` is a copy of
``Z``) or ``{"abgroup": {"presentation": [[...]]}}`` with one row per
generator and one relation per column (``[[]]`` is ``Z``).  Inside
complexes ``{"free": r}`` and a bare integer list of invariants are
accepted too.

Complexes: ``{"complex": {"lo": 0, "objects": [...], "differentials":
[...]}}``; ``differentials[i]`` is ``d_{lo+1+i}`` as a target x source
matrix.  Chain maps: ``{"chain_map": {"source": ..., "target": ...,
"components": {"0": [[...]]}}}``.  Short exact sequences of complexes:
``{"ses": {"cone": <chain map>}}`` or ``{"ses": {"split": {"A": ..., "C":
..., "twist": {...}}}}``.

Groups: ``{"group": {"cayley": [[...]], "identity": 0}}``, ``{"perm_group":
{"degree": n, "generators": [[...]]}}``, ``{"builtin": "A5"}``,
``{"product": [<group>, <group>]}`` or ``{"quotient": {"group": <group>,
"normal": K}}``.

Extensions: ``{"extension": {"middle": <group>, "kernel": K}}`` where ``K``
is ``"center"``, ``"derived"``, ``"trivial"`` or ``{"generated": [...]}``
(normal closure; ``"trivial"`` gives ``1 --> G --id--> G``);
``{"extension": {"A": .., "E": .., "X": .., "iota": [...], "pi":
[...]}}``; ``{"split": {"A": .., "X": ..}}``; double extensions
``{"double_extension": {"middle": <group>, "N1": K, "N2": K}}``.

Probe libraries: ``{"version": 1, "base": "<extension file>", "probes":
[...]}`` with entries ``{"name": .., "product": k}``, ``{"name": ..,
"self": true}``, ``{"name": .., "fibered_product": k}`` or ``{"name": ..,
"file": "<extension file>"}``; paths are relative to the library file.
Probes are always built over the library's own base.
"""

from __future__ import annotations

import json
import os
import re

from .errors import GroupAxiomError, HomcatError, ParseError, PreconditionError
from .fgab import AbMorphism, FgAbGroup, IntMatrix
from .uce import trivial_extension
from .grp import (
    Extension,
    FiniteGroup,
    GroupHom,
    center,
    derived_subgroup,
    direct_product,
    double_extension_from_normals,
    extension_from_normal,
    group_from_cayley,
    group_from_permutations,
    named_group,
    normal_closure,
    quotient_group,
    split_extension,
    trivial_subgroup,
)


class _Src:
    """Raw text kept for locating keys in error messages."""

    def __init__(self, text, path):
        self.text, self.path = text, path

    def where(self, key):
        m = re.search(r'"%s"\s*:' % re.escape(str(key)), self.text) if key is not None else None
        if not m:
            return 1, 1
        before = self.text[:m.start()]
        line = before.count("\n") + 1
        col = m.start() - (before.rfind("\n") + 1) + 1
        return line, col

    def fail(self, msg, key=None):
        line, col = self.where(key)
        where = f"{self.path}: " if self.path else ""
        raise ParseError(where + msg, line, col)


def parse_text(text: str, path: str | None = None):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as ex:
        where = f"{path}: " if path else ""
        raise ParseError(where + ex.msg, ex.lineno, ex.colno) from None
    return data, _Src(text, path)


def read_file(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as ex:
        raise ParseError(f"{path}: cannot read ({ex.strerror})", 1, 1) from None
    return parse_text(text, path)


def _need(src, obj, key, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        src.fail(f"missing key {key!r}", None if not isinstance(obj, dict) else next(iter(obj), None))
    v = obj[key]
    if kind is not None and not isinstance(v, kind):
        src.fail(f"key {key!r} has the wrong type", key)
    return v


def _int_rows(src, rows, key):
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        src.fail("matrix must be a list of rows", key)
    width = len(rows[0]) if rows else 0
    for r in rows:
        if len(r) != width:
            src.fail("matrix rows have different lengths", key)
        for x in r:
            if not isinstance(x, int) or isinstance(x, bool):
                src.fail("matrix entries must be integers", key)
    return rows


def matrix_from(src, rows, key="matrix", shape=None) -> IntMatrix:
    rows = _int_rows(src, rows, key)
    if shape is not None:
        r, c = shape
        if (len(rows), len(rows[0]) if rows else c) != (r, c) and not (r == 0 or c == 0):
            src.fail(f"matrix must be {r}x{c}", key)
        if not rows:
            return IntMatrix.zeros(r, c)
    return IntMatrix(rows)


# ---------------------------------------------------------------------------
# abelian groups and complexes
# ---------------------------------------------------------------------------


def abgroup_from(src, spec, key="abgroup") -> FgAbGroup:
    if isinstance(spec, list):
        spec = {"invariants": spec}
    if isinstance(spec, int) and not isinstance(spec, bool):
        return FgAbGroup.free(spec)
    if not isinstance(spec, dict):
        src.fail("abelian group must be an object or a list of invariants", key)
    if "abgroup" in spec:
        return abgroup_from(src, spec["abgroup"], "abgroup")
    if "free" in spec:
        r = spec["free"]
        if not isinstance(r, int) or r < 0:
            src.fail("free rank must be a nonnegative integer", "free")
        return FgAbGroup.free(r)
    if "invariants" in spec:
        inv = spec["invariants"]
        if not isinstance(inv, list) or not all(isinstance(x, int) and x >= 0 for x in inv):
            src.fail("invariants must be nonnegative integers", "invariants")
        free = sum(1 for x in inv if x == 0)
        return FgAbGroup.from_invariants(free, [x for x in inv if x > 1])
    if "presentation" in spec:
        rows = spec["presentation"]
        if not isinstance(rows, list) or not rows:
            src.fail("presentation needs at least one row", "presentation")
        if all(r == [] for r in rows):
            return FgAbGroup.free(len(rows))
        return FgAbGroup.from_presentation(matrix_from(src, rows, "presentation"))
    if "relations" in spec:
        n = _need(src, spec, "ngens", int)
        rows = spec["relations"]
        if rows == []:
            return FgAbGroup.free(n)
        M = matrix_from(src, rows, "relations")
        if M.rows != n:
            src.fail("relation matrix needs one row per generator", "relations")
        return FgAbGroup(n, M)
    src.fail("abelian group needs invariants, relations or free", key)


def complex_from(src, spec):
    from .chains import ChainComplex

    spec = spec.get("complex", spec) if isinstance(spec, dict) else spec
    lo = _need(src, spec, "lo", int)
    objs = _need(src, spec, "objects", list)
    if not objs:
        src.fail("complex needs at least one object", "objects")
    groups = [abgroup_from(src, o, "objects") for o in objs]
    hi = lo + len(groups) - 1
    if "hi" in spec and spec["hi"] != hi:
        src.fail(f"hi = {spec['hi']} does not match {len(groups)} objects from lo = {lo}", "hi")
    diffs = spec.get("differentials", [])
    if isinstance(diffs, dict):
        try:
            diffs = {int(k): v for k, v in diffs.items()}
        except ValueError:
            src.fail("differential degrees must be integers", "differentials")
    else:
        diffs = {lo + 1 + i: v for i, v in enumerate(diffs)}
    maps = {}
    for n, rows in diffs.items():
        if not lo < n <= hi:
            src.fail(f"differential d_{n} outside the degree range", "differentials")
        S, T = groups[n - lo], groups[n - 1 - lo]
        M = matrix_from(src, rows, "differentials", (T.ngens, S.ngens))
        try:
            maps[n] = AbMorphism(S, T, M)
        except HomcatError as ex:
            src.fail(f"d_{n}: {ex}", "differentials")
        except ValueError as ex:
            src.fail(f"d_{n}: {ex}", "differentials")
    try:
        return ChainComplex(lo, hi, {lo + i: G for i, G in enumerate(groups)}, maps)
    except ValueError as ex:
        src.fail(str(ex), "differentials")


def chain_map_from(src, spec):
    from .chains import ChainMap

    spec = spec.get("chain_map", spec)
    A = complex_from(src, _need(src, spec, "source", dict))
    B = complex_from(src, _need(src, spec, "target", dict))
    comps = {}
    for k, rows in _need(src, spec, "components", dict).items():
        try:
            n = int(k)
        except ValueError:
            src.fail("component degrees must be integers", "components")
        M = matrix_from(src, rows, "components", (B.obj(n).ngens, A.obj(n).ngens))
        comps[n] = AbMorphism(A.obj(n), B.obj(n), M)
    try:
        return ChainMap(A, B, comps)
    except (ValueError, HomcatError) as ex:
        src.fail(str(ex), "components")


def ses_from(src, spec):
    from .chains import cone_sequence, split_sequence

    spec = spec.get("ses", spec)
    if "cone" in spec:
        return cone_sequence(chain_map_from(src, spec["cone"]))
    if "split" in spec:
        s = spec["split"]
        A = complex_from(src, _need(src, s, "A", dict))
        C = complex_from(src, _need(src, s, "C", dict))
        tw = {}
        for k, rows in s.get("twist", {}).items():
            n = int(k)
            tw[n] = AbMorphism(C.obj(n), A.obj(n - 1),
                               matrix_from(src, rows, "twist", (A.obj(n - 1).ngens, C.obj(n).ngens)))
        try:
            return split_sequence(A, C, tw)
        except (ValueError, HomcatError) as ex:
            src.fail(str(ex), "twist")
    src.fail("sequence needs 'cone' or 'split'", "ses")


# ---------------------------------------------------------------------------
# groups and extensions
# ---------------------------------------------------------------------------


def group_from(src, spec, key="group") -> FiniteGroup:
    if not isinstance(spec, dict):
        src.fail("group must be an object", key)
    if "group" in spec:
        return group_from(src, spec["group"], "group")
    if "cayley" in spec:
        table = _int_rows(src, spec["cayley"], "cayley")
        e = spec.get("identity", 0)
        try:
            return group_from_cayley(table, e, name=spec.get("name"))
        except GroupAxiomError as ex:
            line, col = src.where("cayley")
            raise GroupAxiomError(str(ex), line, col) from None
        except (ValueError, PreconditionError) as ex:
            src.fail(str(ex), "cayley")
    if "perm_group" in spec:
        pg = spec["perm_group"]
        deg = _need(src, pg, "degree", int)
        gens = _need(src, pg, "generators", list)
        for g in gens:
            if not isinstance(g, list) or sorted(g) != list(range(deg)):
                src.fail("generator is not a permutation of 0..degree-1", "generators")
        return group_from_permutations(deg, gens, name=spec.get("name"))
    if "builtin" in spec:
        try:
            return named_group(spec["builtin"])
        except (KeyError, ValueError, PreconditionError) as ex:
            src.fail(f"unknown builtin group: {ex}", "builtin")
    if "product" in spec:
        parts = spec["product"]
        if not isinstance(parts, list) or len(parts) != 2:
            src.fail("product takes two groups", "product")
        G, H = (group_from(src, p, "product") for p in parts)
        return direct_product(G, H)
    if "quotient" in spec:
        q = spec["quotient"]
        G = group_from(src, _need(src, q, "group"), "quotient")
        N = _normal_from(src, G, _need(src, q, "normal"), "normal")
        return quotient_group(G, N)[0]
    src.fail("group needs cayley, perm_group, builtin, product or quotient", key)


def _normal_from(src, G, spec, key):
    if spec == "center":
        return center(G)
    if spec == "derived":
        return derived_subgroup(G)
    if spec == "trivial":
        return trivial_subgroup(G)
    if isinstance(spec, dict) and "generated" in spec:
        els = spec["generated"]
        if not all(isinstance(x, int) and 0 <= x < G.order for x in els):
            src.fail("generators must be element indices", key)
        return normal_closure(G, els)
    src.fail("normal subgroup must be center, derived, trivial or {generated: [...]}", key)


def extension_from(src, spec):
    if not isinstance(spec, dict):
        src.fail("extension must be an object", "extension")
    if "split" in spec:
        s = spec["split"]
        return split_extension(group_from(src, _need(src, s, "A"), "A"),
                               group_from(src, _need(src, s, "X"), "X"))
    if "extension" not in spec:
        src.fail("missing key 'extension'")
    e = spec["extension"]
    name = e.get("name")
    try:
        if "middle" in e:
            G = group_from(src, e["middle"], "middle")
            if e.get("kernel") == "trivial":
                ext = trivial_extension(G)
                return Extension(ext.A, ext.E, ext.X, ext.iota, ext.pi, name)
            N = _normal_from(src, G, _need(src, e, "kernel"), "kernel")
            return extension_from_normal(G, N, name)
        A = group_from(src, _need(src, e, "A"), "A")
        E = group_from(src, _need(src, e, "E"), "E")
        X = group_from(src, _need(src, e, "X"), "X")
        iota = GroupHom(A, E, _need(src, e, "iota", list))
        pi = GroupHom(E, X, _need(src, e, "pi", list))
        return Extension(A, E, X, iota, pi, name)
    except PreconditionError as ex:
        src.fail(f"invalid extension: {ex}", "extension")
    except ValueError as ex:
        src.fail(f"invalid extension: {ex}", "extension")


def double_extension_from(src, spec):
    d = _need(src, spec, "double_extension", dict)
    G = group_from(src, _need(src, d, "middle"), "middle")
    N1 = _normal_from(src, G, _need(src, d, "N1"), "N1")
    N2 = _normal_from(src, G, _need(src, d, "N2"), "N2")
    try:
        return double_extension_from_normals(G, N1, N2)
    except PreconditionError as ex:
        src.fail(f"invalid double extension: {ex}", "double_extension")


def any_extension_from(src, spec):
    if isinstance(spec, dict) and "double_extension" in spec:
        return double_extension_from(src, spec)
    return extension_from(src, spec)


# ---------------------------------------------------------------------------
# file-level helpers
# ---------------------------------------------------------------------------


def load_matrix(path) -> IntMatrix:
    data, src = read_file(path)
    return matrix_from(src, _need(src, data, "matrix"), "matrix")


def load_abgroup(path) -> FgAbGroup:
    data, src = read_file(path)
    return abgroup_from(src, data)


def load_complex(path):
    data, src = read_file(path)
    return complex_from(src, data)


def load_ses(path):
    data, src = read_file(path)
    return ses_from(src, data)


def load_group(path) -> FiniteGroup:
    data, src = read_file(path)
    return group_from(src, data)


def load_extension(path):
    data, src = read_file(path)
    return any_extension_from(src, data)


def load_probe_library(path, base: Extension | None = None):
    """Returns ``(base extension, [(name, extension), ...], version)``."""
    from .uce import fibered_product, product_probe

    data, src = read_file(path)
    version = _need(src, data, "version")
    root = os.path.dirname(os.path.abspath(path))
    if base is None:
        ref = _need(src, data, "base")
        base = load_extension(os.path.join(root, ref)) if isinstance(ref, str) \
            else extension_from(src, ref)
    out = []
    for i, pr in enumerate(_need(src, data, "probes", list)):
        if not isinstance(pr, dict):
            src.fail(f"probe {i} must be an object", "probes")
        name = pr.get("name", f"probe {i}")
        if "product" in pr:
            f = product_probe(base.X, int(pr["product"]))
        elif pr.get("self"):
            f = base
        elif "fibered_product" in pr:
            f = fibered_product(base, product_probe(base.X, int(pr["fibered_product"])))
        elif "file" in pr:
            f = load_extension(os.path.join(root, pr["file"]))
            if f.X != base.X:
                src.fail(f"probe {name!r} is not over the base group", "file")
        else:
            src.fail(f"probe {name!r} has no construction", "probes")
        out.append((name, f))
    return base, out, version


def load_probes(path):
    """A library file or a directory of library files (sorted by name)."""
    if os.path.isdir(path):
        files = sorted(f for f in os.listdir(path) if f.endswith(".json"))
        if not files:
            raise ParseError(f"{path}: no probe library files", 1, 1)
        probes, versions = [], []
        for f in files:
            _, ps, v = load_probe_library(os.path.join(path, f))
            probes += ps
            versions.append(f"{f}@{v}")
        return probes, versions
    _, ps, v = load_probe_library(path)
    return ps, [f"{os.path.basename(path)}@{v}"]
