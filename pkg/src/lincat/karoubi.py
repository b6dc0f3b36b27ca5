"""Finite fragments of the idempotent completion.

Objects are pairs (tuple of base objects, idempotent block matrix); the
morphisms between (X, p) and (Y, q) form the compressed space of block
matrices of the shape p b q.  A fragment realizes finitely many such
pairs as an honest LinCat whose hom spaces are chosen echelon bases of
the compressed blocks, so every downstream tool (functors, Hochschild,
Morita) applies unchanged.

The completion itself is infinite; anything that would need an object
outside the fragment is reported as NotPresent instead of auto-extended.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .core import GraphType, LinCat, new_lincat
from .errors import MissingUnits, NotIdempotent, ShapeMismatch, UnknownName
from .fields import Scalar
from .functors import LinFunctor, Witness, find_isomorphism, new_functor
from .linalg import Matrix, image_basis, solve, solve_many

Block = List[List[List[Scalar]]]  # blocks[i][j]: coords in C(X_i, Y_j)


def _zero_block(c: LinCat, xs: Sequence[str], ys: Sequence[str]) -> Block:
    z = c.field.zero
    return [[[z] * c.d(x, y) for y in ys] for x in xs]


def _identity_block(c: LinCat, xs: Sequence[str]) -> Block:
    out = _zero_block(c, xs, xs)
    for i, x in enumerate(xs):
        out[i][i] = list(c.units[x])
    return out


def block_compose(c: LinCat, xs, ys, zs, f: Block, g: Block) -> Block:
    k = c.field
    out = _zero_block(c, xs, zs)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            fij = f[i][j]
            if all(k.is_zero(v) for v in fij):
                continue
            for l, zobj in enumerate(zs):
                tensor = c.mult[(x, y, zobj)]
                cell = out[i][l]
                gjl = g[j][l]
                for a, fa in enumerate(fij):
                    if k.is_zero(fa):
                        continue
                    for b, gb in enumerate(gjl):
                        if k.is_zero(gb):
                            continue
                        row = tensor[a][b]
                        w = k.mul(fa, gb)
                        for t in range(len(cell)):
                            if not k.is_zero(row[t]):
                                cell[t] = k.add(cell[t], k.mul(w, row[t]))
    return out


def _block_eq(c: LinCat, f: Block, g: Block) -> bool:
    k = c.field
    for ri, rj in zip(f, g):
        for ci, cj in zip(ri, rj):
            for a, b in zip(ci, cj):
                if not k.is_zero(k.sub(a, b)):
                    return False
    return True


def _block_sub(c: LinCat, f: Block, g: Block) -> Block:
    k = c.field
    return [
        [[k.sub(a, b) for a, b in zip(ci, cj)] for ci, cj in zip(ri, rj)]
        for ri, rj in zip(f, g)
    ]


def _flatten(c: LinCat, xs, ys, f: Block) -> List[Scalar]:
    out: List[Scalar] = []
    for i in range(len(xs)):
        for j in range(len(ys)):
            out.extend(f[i][j])
    return out


def _unflatten(c: LinCat, xs, ys, vec: Sequence[Scalar]) -> Block:
    out = _zero_block(c, xs, ys)
    t = 0
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            d = c.d(x, y)
            out[i][j] = list(vec[t : t + d])
            t += d
    return out


@dataclass
class KaroubiObject:
    base: LinCat
    parts: Tuple[str, ...]
    projector: Block

    def is_idempotent(self) -> bool:
        sq = block_compose(self.base, self.parts, self.parts, self.parts, self.projector, self.projector)
        return _block_eq(self.base, sq, self.projector)


def new_karoubi_object(c: LinCat, parts: Sequence[str], projector) -> KaroubiObject:
    parts = tuple(parts)
    for x in parts:
        if x not in c.objects:
            raise UnknownName(f"no object named {x!r}")
    k = c.field
    blocks: Block = []
    for i, x in enumerate(parts):
        row = []
        for j, y in enumerate(parts):
            cell = [v if not isinstance(v, int) else k.from_int(v) for v in projector[i][j]]
            if len(cell) != c.d(x, y):
                raise ShapeMismatch(f"projector block ({i + 1},{j + 1}) has the wrong length")
            row.append(cell)
        blocks.append(row)
    obj = KaroubiObject(c, parts, blocks)
    if not obj.is_idempotent():
        raise NotIdempotent("projector is not idempotent")
    return obj


def zero_object(c: LinCat) -> KaroubiObject:
    return KaroubiObject(c, (), [])


def unit_object(c: LinCat, x: str) -> KaroubiObject:
    if x not in c.objects:
        raise UnknownName(f"no object named {x!r}")
    return KaroubiObject(c, (x,), [[list(c.units[x])]])


def biproduct_object(a: KaroubiObject, b: KaroubiObject) -> KaroubiObject:
    c = a.base
    parts = a.parts + b.parts
    p = _zero_block(c, parts, parts)
    na = len(a.parts)
    for i in range(na):
        for j in range(na):
            p[i][j] = list(a.projector[i][j])
    for i in range(len(b.parts)):
        for j in range(len(b.parts)):
            p[na + i][na + j] = list(b.projector[i][j])
    return KaroubiObject(c, parts, p)


@dataclass
class KaroubiFragment:
    base: LinCat
    objects: Tuple[KaroubiObject, ...]
    names: Tuple[str, ...]
    realized: LinCat
    hom_bases: Dict[Tuple[int, int], List[List[Scalar]]]

    def index_of(self, obj: KaroubiObject) -> Optional[int]:
        for t, mine in enumerate(self.objects):
            if mine.parts == obj.parts and _block_eq(self.base, mine.projector, obj.projector):
                return t
        return None

    def to_block(self, i: int, j: int, coords: Sequence[Scalar]) -> Block:
        k = self.base.field
        src, dst = self.objects[i], self.objects[j]
        n = len(self.hom_bases[(i, j)][0]) if self.hom_bases[(i, j)] else 0
        flat = [k.zero] * n
        for cval, basis_vec in zip(coords, self.hom_bases[(i, j)]):
            if k.is_zero(cval):
                continue
            for t in range(n):
                flat[t] = k.add(flat[t], k.mul(cval, basis_vec[t]))
        return _unflatten(self.base, src.parts, dst.parts, flat)

    def to_coords_many(self, i: int, j: int, blocks: Sequence[Block]) -> List[List[Scalar]]:
        k = self.base.field
        basis = self.hom_bases[(i, j)]
        flats = [
            _flatten(self.base, self.objects[i].parts, self.objects[j].parts, b) for b in blocks
        ]
        if not basis:
            for flat in flats:
                if any(not k.is_zero(v) for v in flat):
                    raise ShapeMismatch("morphism outside the compressed hom space")
            return [[] for _ in flats]
        nfull = len(basis[0])
        stacked = Matrix(
            nfull, len(basis), tuple(basis[t][r] for r in range(nfull) for t in range(len(basis))), k
        )
        got = solve_many(stacked, flats)
        if any(sol is None for sol in got):
            raise ShapeMismatch("morphism outside the compressed hom space")
        return got

    def to_coords(self, i: int, j: int, block: Block) -> List[Scalar]:
        return self.to_coords_many(i, j, [block])[0]


def build_fragment(
    c: LinCat, objs: Sequence[KaroubiObject], validate_laws: bool = True
) -> KaroubiFragment:
    k = c.field
    objs = tuple(objs)
    for t, o in enumerate(objs):
        if not o.is_idempotent():
            raise NotIdempotent(f"projector of object {t + 1} is not idempotent")
    names = tuple(f"k{t}" for t in range(len(objs)))
    hom_bases: Dict[Tuple[int, int], List[List[Scalar]]] = {}
    for i, src in enumerate(objs):
        for j, dst in enumerate(objs):
            nfull = sum(c.d(x, y) for x in src.parts for y in dst.parts)
            cols: List[List[Scalar]] = []
            for t in range(nfull):
                vec = [k.zero] * nfull
                vec[t] = k.one
                blk = _unflatten(c, src.parts, dst.parts, vec)
                mid = block_compose(c, src.parts, src.parts, dst.parts, src.projector, blk)
                out = block_compose(c, src.parts, dst.parts, dst.parts, mid, dst.projector)
                cols.append(_flatten(c, src.parts, dst.parts, out))
            if cols:
                mat = Matrix(
                    nfull, nfull, tuple(cols[j2][i2] for i2 in range(nfull) for j2 in range(nfull)), k
                )
                hom_bases[(i, j)] = image_basis(mat)
            else:
                hom_bases[(i, j)] = []
    dims = {(names[i], names[j]): len(hom_bases[(i, j)]) for i in range(len(objs)) for j in range(len(objs))}
    graph = GraphType(names, dims)
    mult = {}
    frag_stub = KaroubiFragment(c, objs, names, None, hom_bases)  # realized filled below
    for i in range(len(objs)):
        for l in range(len(objs)):
            di, dl = dims[(names[i], names[l])], dims[(names[i], names[l])]
            comps: List[Block] = []
            spans: List[Tuple[int, int, int]] = []  # (j, a, b)
            for j in range(len(objs)):
                dij, djl = dims[(names[i], names[j])], dims[(names[j], names[l])]
                fas = [
                    _unflatten(c, objs[i].parts, objs[j].parts, hom_bases[(i, j)][a])
                    for a in range(dij)
                ]
                gbs = [
                    _unflatten(c, objs[j].parts, objs[l].parts, hom_bases[(j, l)][b])
                    for b in range(djl)
                ]
                for a in range(dij):
                    for b in range(djl):
                        comps.append(
                            block_compose(
                                c, objs[i].parts, objs[j].parts, objs[l].parts, fas[a], gbs[b]
                            )
                        )
                        spans.append((j, a, b))
            coords = frag_stub.to_coords_many(i, l, comps)
            tensors: Dict[int, List[List[List[Scalar]]]] = {}
            for (j, a, b), cval in zip(spans, coords):
                dij, djl = dims[(names[i], names[j])], dims[(names[j], names[l])]
                dl2 = dims[(names[i], names[l])]
                if j not in tensors:
                    tensors[j] = [[[k.zero] * dl2 for _ in range(djl)] for _ in range(dij)]
                tensors[j][a][b] = cval
            for j in range(len(objs)):
                dij, djl = dims[(names[i], names[j])], dims[(names[j], names[l])]
                dl2 = dims[(names[i], names[l])]
                tensor = tensors.get(j, [[[k.zero] * dl2 for _ in range(djl)] for _ in range(dij)])
                mult[(names[i], names[j], names[l])] = tuple(
                    tuple(tuple(cell) for cell in row) for row in tensor
                )
    units = {}
    for i in range(len(objs)):
        units[names[i]] = tuple(frag_stub.to_coords(i, i, objs[i].projector))
    realized = new_lincat(k, graph, mult, units, validate_laws=validate_laws)
    return KaroubiFragment(c, objs, names, realized, hom_bases)


def embed(c: LinCat, frag: KaroubiFragment) -> LinFunctor:
    omap = {}
    for x in c.objects:
        idx = frag.index_of(unit_object(c, x))
        if idx is None:
            raise MissingUnits(f"fragment lacks the unit object for {x!r}")
        omap[x] = frag.names[idx]
    mats = {}
    k = c.field
    idx_of = {x: frag.index_of(unit_object(c, x)) for x in c.objects}
    for x in c.objects:
        for y in c.objects:
            d = c.d(x, y)
            i, j = idx_of[x], idx_of[y]
            blocks = []
            for t in range(d):
                vec = [k.zero] * d
                vec[t] = k.one
                blocks.append([[vec]])
            cols = frag.to_coords_many(i, j, blocks)
            dd = frag.realized.d(omap[x], omap[y])
            mats[(x, y)] = Matrix(
                dd, d, tuple(cols[jj][ii] for ii in range(dd) for jj in range(d)), k
            )
    return new_functor(c, frag.realized, omap, mats)


@dataclass
class Split:
    image_index: int
    kernel_index: int
    r: List[Scalar]  # image -> obj, realized coords
    s: List[Scalar]  # obj -> image
    r_ker: List[Scalar]
    s_ker: List[Scalar]


@dataclass
class NotPresent:
    missing: str


def _as_index(frag: KaroubiFragment, obj: Union[int, KaroubiObject]) -> int:
    if isinstance(obj, int):
        if not (0 <= obj < len(frag.objects)):
            raise UnknownName("object index out of range")
        return obj
    idx = frag.index_of(obj)
    if idx is None:
        raise UnknownName("object is not part of the fragment")
    return idx


def _find_realizer(
    frag: KaroubiFragment, candidate: KaroubiObject, seed: int = 0
) -> Tuple[Optional[int], Optional[Witness], Optional[KaroubiFragment]]:
    """Extend the fragment by the candidate and look for an isomorphic
    original object; certified absences return (None, None, temp).

    The extension holds category laws by construction (it composes actual
    morphisms of the base), so the law re-check is skipped; every witness
    that leaves this search is verified in the real fragment."""
    temp = build_fragment(frag.base, frag.objects + (candidate,), validate_laws=False)
    cand_name = temp.names[-1]
    for j in range(len(frag.objects)):
        res = find_isomorphism(temp.realized, temp.names[j], cand_name, seed=seed)
        if isinstance(res, Witness):
            return j, res, temp
    return None, None, temp


def split_projector(
    frag: KaroubiFragment, obj: Union[int, KaroubiObject], p: Sequence[Scalar], seed: int = 0
):
    c = frag.base
    k = c.field
    i = _as_index(frag, obj)
    name = frag.names[i]
    r = frag.realized
    d = r.d(name, name)
    if len(p) != d:
        raise ShapeMismatch("projector coordinates have the wrong length")
    p = [v if not isinstance(v, int) else k.from_int(v) for v in p]
    from .core import compose as cat_compose

    sq = cat_compose(r, name, name, name, p, p)
    if any(not k.is_zero(k.sub(a, b)) for a, b in zip(sq, p)):
        raise NotIdempotent("endomorphism is not idempotent")
    X = frag.objects[i]
    P = frag.to_block(i, i, p)
    image = KaroubiObject(c, X.parts, P)
    kernel = KaroubiObject(c, X.parts, _block_sub(c, X.projector, P))
    out: List[Tuple[int, List[Scalar], List[Scalar]]] = []
    for piece, block in (("image", image), ("kernel", kernel)):
        j, wit, temp = _find_realizer(frag, block, seed=seed)
        if j is None:
            return NotPresent(f"no object of the fragment realizes the {piece} of the projector")
        # the block itself is a morphism both ways between (X, block) and (X, p_X)
        ti = temp.names.index(frag.names[i])
        tc = len(temp.objects) - 1
        inc = temp.to_coords(tc, ti, block.projector)  # candidate -> obj
        prj = temp.to_coords(ti, tc, block.projector)  # obj -> candidate
        # transport along the found isomorphism j ~ candidate
        r_mor = cat_compose(temp.realized, temp.names[j], temp.names[tc], temp.names[ti], wit.fwd, inc)
        s_mor = cat_compose(temp.realized, temp.names[ti], temp.names[tc], temp.names[j], prj, wit.bwd)
        out.append((j, r_mor, s_mor))
        if piece == "image":
            p_here = p
        else:
            p_here = [k.sub(a, b) for a, b in zip(r.units[name], p)]
        ident = cat_compose(r, frag.names[j], name, frag.names[j], r_mor, s_mor)
        if any(not k.is_zero(k.sub(a, b)) for a, b in zip(ident, r.units[frag.names[j]])):
            raise NotIdempotent("split witness fails the identity equation")
        back = cat_compose(r, name, frag.names[j], name, s_mor, r_mor)
        if any(not k.is_zero(k.sub(a, b)) for a, b in zip(back, p_here)):
            raise NotIdempotent("split witness fails the projector equation")
    (im_j, im_r, im_s), (ke_j, ke_r, ke_s) = out
    return Split(im_j, ke_j, im_r, im_s, ke_r, ke_s)


@dataclass
class KaroubianReport:
    zero_object_present: bool
    missing_biproducts: List[Tuple[int, int]]
    unsplit: List[Tuple[int, List[Scalar]]]
    checked_projectors: int
    karoubian: bool


def _candidate_projectors(frag: KaroubiFragment, i: int, seed: int, samples: int) -> List[List[Scalar]]:
    import random

    r = frag.realized
    k = frag.base.field
    name = frag.names[i]
    d = r.d(name, name)
    from .core import compose as cat_compose

    def idem(vec: List[Scalar]) -> bool:
        sq = cat_compose(r, name, name, name, vec, vec)
        return all(k.is_zero(k.sub(a, b)) for a, b in zip(sq, vec))

    seen = set()
    out: List[List[Scalar]] = []

    def push(vec: List[Scalar]) -> None:
        key = tuple(k.fmt(v) for v in vec)
        if key not in seen and idem(vec):
            seen.add(key)
            out.append(vec)

    push([k.zero] * d)
    push(list(r.units[name]))
    basis = []
    for t in range(d):
        vec = [k.zero] * d
        vec[t] = k.one
        basis.append(vec)
        push(vec)
    for a in range(d):
        for b in range(a + 1, d):
            push([k.add(x, y) for x, y in zip(basis[a], basis[b])])
    rng = random.Random(seed)
    hi = k.p - 1 if getattr(k, "kind", None) == "Fp" else 2
    for _ in range(samples):
        push([k.from_int(rng.randint(0, hi)) for _ in range(d)])
    return out


def is_karoubian_within(frag: KaroubiFragment, seed: int = 0, samples: int = 8) -> KaroubianReport:
    r = frag.realized
    zero_present = any(r.d(n, n) == 0 for n in frag.names)
    missing: List[Tuple[int, int]] = []
    for i in range(len(frag.objects)):
        for j in range(len(frag.objects)):
            if i > j:
                continue
            cand = biproduct_object(frag.objects[i], frag.objects[j])
            found, _, _ = _find_realizer(frag, cand, seed=seed)
            if found is None:
                missing.append((i, j))
    unsplit: List[Tuple[int, List[Scalar]]] = []
    checked = 0
    for i in range(len(frag.objects)):
        for p in _candidate_projectors(frag, i, seed, samples):
            checked += 1
            res = split_projector(frag, i, p, seed=seed)
            if isinstance(res, NotPresent):
                unsplit.append((i, p))
    return KaroubianReport(
        zero_object_present=zero_present,
        missing_biproducts=missing,
        unsplit=unsplit,
        checked_projectors=checked,
        karoubian=zero_present and not missing and not unsplit,
    )
