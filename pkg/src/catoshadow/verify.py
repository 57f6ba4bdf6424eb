"""One-shot verification battery over a single Cartan type.

Every check returns a :class:`CheckRecord`; a failing check carries a witness
string naming the first counterexample.  Fault injection (``tamper``) swaps a
convention or a normalization for the whole run and must make the battery fail.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from . import blocks as B
from .coinv import (
    CoinvariantAlgebra,
    HilbertSeries,
    MultiPoly,
    build_coinvariants,
    invariant_subalgebra,
    product_formula,
)
from .hecke import HeckeElement, cached_kl_table, hecke_multiply, kl_basis, specialize_q1
from .laurent import LaurentPoly
from .soergel import (
    bott_samelson,
    predicted_summand_dims,
    split_idempotents,
    struktursatz_values,
)
from .weyl import WeylGroup, all_subsets, weyl_group

TAMPERS = ("swap-cosets", "transpose-reciprocity", "wrong-schubert-normalization")
MODULES = ("weyl", "hecke", "coinv", "blocks", "soergel")
SOERGEL_TYPES = ("A1", "A2", "B2")
DEFAULT_SEED = 5


@dataclass
class CheckRecord:
    name: str
    statement: str
    passed: bool
    witness: str = ""


@dataclass
class VerifyReport:
    type_name: str
    checks: list[CheckRecord] = field(default_factory=list)
    conventions: dict = field(default_factory=dict)
    tamper: str | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def sorted(self) -> list[CheckRecord]:
        return sorted(self.checks, key=lambda c: c.name)

    def to_dict(self) -> dict:
        return {
            "type": self.type_name,
            "tamper": self.tamper,
            "overall": "pass" if self.passed else "fail",
            "conventions": self.conventions,
            "checks": [
                {"name": c.name, "statement": c.statement, "status": "pass" if c.passed else "fail", "witness": c.witness}
                for c in self.sorted()
            ],
        }


class _Fail(Exception):
    pass


def _expect(cond: bool, witness: str) -> None:
    if not cond:
        raise _Fail(witness)


@dataclass
class _Context:
    group: WeylGroup
    conv: B.Conventions
    schubert_scale: Fraction
    seed: int

    @property
    def name(self) -> str:
        return self.group.datum.name

    def block(self, lam) -> B.BlockDescriptor:
        return B.make_block(self.group, lam, self.conv)

    @property
    def regular(self) -> B.BlockDescriptor:
        return B.regular_block(self.group, self.conv)

    def walls(self):
        """Every rho-dominant integral weight with entries in {-1, 0}."""
        return [B.wall_weight(self.group, s) for s in all_subsets(self.group.rank)]

    _coinv: CoinvariantAlgebra | None = None

    @property
    def coinv(self) -> CoinvariantAlgebra:
        if self._coinv is None:
            self._coinv = build_coinvariants(self.group, self.schubert_scale)
        return self._coinv


# ---- weyl -------------------------------------------------------------

def check_group_order(ctx: _Context) -> None:
    G = ctx.group
    _expect(G.poincare_polynomial() == list(product_formula(G.datum.degrees).coeffs),
            f"Poincare polynomial {G.poincare_polynomial()}")
    _expect(G.length(G.longest) == len(G.datum.positive_roots), "l(w0) != number of positive roots")


def check_bruhat(ctx: _Context) -> None:
    G = ctx.group
    diff = np.argwhere(G.bruhat_by_reflections() != G.bruhat_matrix)
    _expect(len(diff) == 0, f"orders differ at {diff[:1].tolist()}")


def check_dot_action(ctx: _Context) -> None:
    G = ctx.group
    rho = G.datum.rho
    lam = G.datum.weight([Fraction(k + 1, 3) for k in range(G.rank)])
    for w in G.elements:
        _expect(G.dot_action(w, -rho) == -rho, f"{w} moves -rho")
    for v, w in itertools.product(G.elements[: min(len(G), 24)], repeat=2):
        _expect(G.dot_action(G.mul(v, w), lam) == G.dot_action(v, G.dot_action(w, lam)), f"action law fails at {v},{w}")


# ---- hecke ------------------------------------------------------------

def check_kl_table(ctx: _Context) -> None:
    G = ctx.group
    K = cached_kl_table(G)
    for (x, y), p in K.polys.items():
        _expect(G.bruhat_matrix[x, y], f"P nonzero off Bruhat order at {G.elements[x]},{G.elements[y]}")
        _expect(p[0] == 1, f"P_{G.elements[x]},{G.elements[y]} has constant term {p[0]}")
        _expect(all(c >= 0 for _, c in p.items()), f"negative coefficient in {p}")
        d = int(G.lengths[y] - G.lengths[x])
        if x != y:
            _expect(2 * p.degree() <= d - 1, f"degree bound fails for {p}")
        else:
            _expect(p == 1, "P_x,x != 1")


def check_kl_quadratic(ctx: _Context) -> None:
    G = ctx.group
    K = cached_kl_table(G)
    q1 = LaurentPoly.q() + 1
    for i in range(G.rank):
        bs = kl_basis(K, G.simple(i))
        _expect(hecke_multiply(bs, bs) == bs.scale(q1), f"b_s{i + 1}^2 != (q+1) b_s{i + 1}")


# ---- coinv ------------------------------------------------------------

def check_coinvariant_dims(ctx: _Context) -> None:
    C = ctx.coinv
    G = ctx.group
    _expect(C.dimension == len(G), f"dim C = {C.dimension}")
    _expect(C.hilbert_series() == product_formula(G.datum.degrees), f"Hilbert series {C.hilbert_series()}")


def check_schubert_normalization(ctx: _Context) -> None:
    C = ctx.coinv
    one = MultiPoly.const(ctx.group.rank, 1)
    _expect(C.schubert_polys[0] == one, f"X_e = {C.schubert_polys[0]}, expected 1")


def check_regular_character(ctx: _Context) -> None:
    C = ctx.coinv
    G = ctx.group
    for w in G.elements:
        t = C.trace(w)
        _expect(t == (len(G) if w.length == 0 else 0), f"trace of {w} is {t}")


def check_invariant_subalgebras(ctx: _Context) -> None:
    C = ctx.coinv
    G = ctx.group
    for gens in all_subsets(G.rank):
        par = G.standard_parabolic(gens)
        sub = invariant_subalgebra(C, par)
        _expect(sub.dimension * len(par) == len(G), f"dim C^W' = {sub.dimension} for generators {gens}")
        expected = [0] * (C.top + 1)
        for u in par.min_reps:
            expected[u.length] += 1
        _expect(sub.hilbert == HilbertSeries(expected), f"Hilbert series {sub.hilbert} for generators {gens}")


# ---- blocks -----------------------------------------------------------

def check_cosets(ctx: _Context) -> None:
    G = ctx.group
    for mu in ctx.walls():
        b = ctx.block(mu)
        for w in G.elements:
            rep = b.rep[w]
            _expect(G.dot_action(w, mu) == G.dot_action(rep, mu), f"{w}.{mu} != {rep}.{mu} (index {rep})")


def check_translation_adjunction(ctx: _Context) -> None:
    reg = ctx.regular
    for mu in ctx.walls():
        wall = ctx.block(mu)
        _expect(B.wall_crossing_composition_check(reg, wall), f"theta- theta+ != |W_mu| Id at mu={mu}")
        # also between two singular blocks with nested stabilizers
        for nu in ctx.walls():
            b2 = ctx.block(nu)
            if wall.stabilizer.issubset(b2.stabilizer):
                _expect(B.wall_crossing_composition_check(wall, b2), f"composition fails for {mu} -> {nu}")


def check_antidominant_projective(ctx: _Context) -> None:
    for mu in ctx.walls():
        b = ctx.block(mu)
        bottom = B.rho_fixed_block(ctx.group, ctx.conv)
        f = B.translate_from_wall(bottom, b)
        img = f.apply(B.ClassVector(bottom, "Verma", (1,))).coeffs
        _expect(img == (1,) * len(b), f"theta+ M_-rho = {img} at {mu}")
        col = B.projective_in_verma(b)[:, b.rep_position(ctx.group.longest)]
        _expect(tuple(int(x) for x in col) == img, f"BGG antidominant projective {[int(x) for x in col]} at {mu}")


def check_translation_chain(ctx: _Context) -> None:
    reg = ctx.regular
    bottom = B.rho_fixed_block(ctx.group, ctx.conv)
    direct = B.translate_from_wall(bottom, reg)
    for mu in ctx.walls():
        wall = ctx.block(mu)
        chain = B.compose(B.translate_from_wall(wall, reg), B.translate_from_wall(bottom, wall))
        _expect(chain.equals(direct), f"chain through {mu} differs")
        # projectives go to projectives: theta+ P_mu(antidominant) = P(antidominant)
        p_mu = B.class_of(wall, "Projective", ctx.group.longest)
        p_reg = B.class_of(reg, "Projective", ctx.group.longest)
        _expect(B.translate_from_wall(wall, reg).apply(p_mu) == p_reg, f"theta+ P_mu != P_lam at {mu}")


def check_dominant_projective(ctx: _Context) -> None:
    reg = ctx.regular
    Pm = B.projective_in_verma(reg)
    col = [int(x) for x in Pm[:, 0]]
    _expect(col == [int(k == 0) for k in range(len(reg))], f"[P_e] = {col} in Vermas")


def check_simple_translation(ctx: _Context) -> None:
    reg = ctx.regular
    for mu in ctx.walls():
        wall = ctx.block(mu)
        try:
            M = B.translate_simple(reg, wall)
        except B.InternalConsistencyError as exc:
            raise _Fail(f"mu={mu}: {exc}")
        survivors = int(M.sum())
        _expect(survivors == len(wall), f"{survivors} simples survive at {mu}")
        anti = reg.position[ctx.group.longest]
        _expect(M[:, anti].any(), "antidominant simple killed")


def check_wall_crossing(ctx: _Context) -> None:
    G = ctx.group
    K = cached_kl_table(G)
    reg = ctx.regular
    for s in range(G.rank):
        T = B.wall_crossing(G, s, ctx.conv).matrix
        _expect(np.array_equal(T.dot(T), 2 * T), f"theta_{s + 1}^2 != 2 theta_{s + 1}")
        bs = specialize_q1(kl_basis(K, G.simple(s)))
        R = B.group_ring_operator(reg, bs, "right")
        _expect(np.array_equal(R, T), f"theta_{s + 1} != right multiplication by b_s{s + 1}(q=1)")


def check_projective_functors(ctx: _Context) -> None:
    G = ctx.group
    K = cached_kl_table(G)
    reg = ctx.regular
    Pm = B.projective_in_verma(reg)
    inv = B._integer_inverse(Pm)
    for w in G.elements:
        prod = HeckeElement.one(G)
        for i in w.word:
            prod = hecke_multiply(prod, kl_basis(K, G.simple(i)))
        vec = np.array(specialize_q1(prod), dtype=object)
        coeffs = inv.dot(vec)
        k = reg.position[w]
        _expect(all(c >= 0 for c in coeffs) and coeffs[k] == 1,
                f"b_word({w}) at q=1 is {list(coeffs)} in projectives")
        phi = B.projective_functor_matrix(reg, w)
        e = B.basis_vector(reg, "Verma", G.identity)
        _expect(phi.apply(e).coeffs == tuple(int(x) for x in Pm[:, k]), f"Phi_{w}(M_e) != P_{w}")
    for s in range(G.rank):
        phi = B.projective_functor_matrix(reg, G.simple(s))
        _expect(phi.equals(B.wall_crossing(G, s, ctx.conv)), f"Phi_s{s + 1} != theta_{s + 1}")


def check_tilting(ctx: _Context) -> None:
    G = ctx.group
    reg = ctx.regular
    for w in G.elements:
        a, b = B.tilting_routes(reg, w)
        _expect(a == b, f"Q_{w}: multiplicity formula {a} vs Phi_w(M_w0) {b}")
    anti = reg.position[G.longest]
    qe = B.tilting_routes(reg, G.identity)[0]
    _expect(qe == tuple(int(k == anti) for k in range(len(G))), f"[Q_e] = {qe}")
    qw0 = B.tilting_routes(reg, G.longest)[0]
    _expect(all(c == 1 for c in qw0), f"[Q_w0] = {qw0}")


def check_hom_gram(ctx: _Context) -> None:
    reg = ctx.regular
    gp = B.hom_gram(reg, "Projective")
    gq = B.hom_gram(reg, "Tilting")
    diff = np.argwhere(gp != gq)
    _expect(len(diff) == 0, f"Gram matrices differ at {diff[:1].tolist()}")


def check_euler_form(ctx: _Context) -> None:
    # Euler form on projectives equals the composition count [P_y : L_x]
    reg = ctx.regular
    Pm = B.projective_in_verma(reg)
    D = B.decomposition_matrix(reg)
    gram = B.hom_gram(reg, "Projective")
    comp = D.T.dot(Pm)  # [P_y : L_x] = sum_z [M_z : L_x][P_y : M_z]
    diff = np.argwhere(gram != comp)
    _expect(len(diff) == 0, f"Euler form != [P : L] at {diff[:1].tolist()}")
    _expect((gram >= 0).all(), "negative Hom dimension")


def check_alternating_class(ctx: _Context) -> None:
    reg = ctx.regular
    for mu in ctx.walls():
        wall = ctx.block(mu)
        if wall.is_regular:
            continue
        img = B.translate_to_wall(reg, wall).apply(B.alternating_class(reg)).coeffs
        _expect(not any(img), f"alternating class survives at {mu}: {img}")


def check_endomorphism_dims(ctx: _Context) -> None:
    C = ctx.coinv
    for mu in ctx.walls():
        b = ctx.block(mu)
        anti = B.basis_vector(b, "Projective", ctx.group.longest)
        end = B.hom_dim(anti, anti)
        sub = invariant_subalgebra(C, b.stabilizer)
        _expect(end == sub.dimension, f"End P = {end}, dim C^W_mu = {sub.dimension} at {mu}")


# ---- soergel ----------------------------------------------------------

def _words(rank: int, max_len: int) -> list[tuple[int, ...]]:
    return [w for k in range(max_len + 1) for w in itertools.product(range(rank), repeat=k)]


def check_bott_samelson(ctx: _Context) -> None:
    C = ctx.coinv
    for word in _words(ctx.group.rank, 3):
        M = bott_samelson(C, word)
        _expect(M.dim == 2 ** len(word), f"dim BS{word} = {M.dim}")
        try:
            M.check()
        except AssertionError as exc:
            raise _Fail(f"BS{word}: {exc}")


def check_struktursatz(ctx: _Context) -> None:
    C = ctx.coinv
    reg = ctx.regular
    cache: dict = {}
    words = _words(ctx.group.rank, 3)
    pairs = list(itertools.product(words, repeat=2))
    if ctx.name == "A2":
        rng = random.Random(ctx.seed)
        for _ in range(50):
            w1 = tuple(rng.randrange(2) for _ in range(rng.randint(0, 5)))
            w2 = tuple(rng.randrange(2) for _ in range(rng.randint(0, 5)))
            pairs.append((w1, w2))
    for w1, w2 in pairs:
        lhs, rhs = struktursatz_values(C, reg, w1, w2, cache)
        _expect(lhs == rhs, f"Hom(BS{w1}, BS{w2}) = {lhs}, K-group predicts {rhs}")


def check_splitting(ctx: _Context) -> None:
    C = ctx.coinv
    reg = ctx.regular
    for word in _words(ctx.group.rank, 3):
        parts = split_idempotents(bott_samelson(C, word))
        dims = sorted((p.dim for p in parts), reverse=True)
        pred = predicted_summand_dims(reg, word)
        _expect(dims == pred, f"BS{word} splits as {dims}, K-group predicts {pred}")


CHECKS: list[tuple[str, str, str, Callable[[_Context], None]]] = [
    ("weyl", "weyl.order-poincare", "|W| and sum t^l(w) match the degree product", check_group_order),
    ("weyl", "weyl.bruhat-two-ways", "descent recursion and reflection closure give the same Bruhat order", check_bruhat),
    ("weyl", "weyl.dot-action", "-rho is fixed and (vw).lam = v.(w.lam)", check_dot_action),
    ("hecke", "hecke.kl-invariants", "P_x,x = 1, degree bound, constant term 1, positivity", check_kl_table),
    ("hecke", "hecke.kl-quadratic", "b_s b_s = (q+1) b_s", check_kl_quadratic),
    ("coinv", "coinv.dimension", "dim C = |W| with the degree-product Hilbert series", check_coinvariant_dims),
    ("coinv", "coinv.schubert-normalization", "X_e = 1", check_schubert_normalization),
    ("coinv", "coinv.regular-character", "C is the regular representation of W", check_regular_character),
    ("coinv", "coinv.invariant-subalgebras", "dim C^W' = |W/W'| with coset-length Hilbert series", check_invariant_subalgebras),
    ("blocks", "blocks.coset-side", "w.mu depends only on the index representative of w", check_cosets),
    ("blocks", "blocks.translation-adjunction", "theta- theta+ = |W_mu/W_lam| Id", check_translation_adjunction),
    ("blocks", "blocks.antidominant-projective", "theta+ from -rho sends M_-rho to the antidominant projective", check_antidominant_projective),
    ("blocks", "blocks.translation-chain", "theta^lam_mu theta^mu_-rho = theta^lam_-rho and projectives go to projectives", check_translation_chain),
    ("blocks", "blocks.dominant-projective", "the dominant Verma module is projective", check_dominant_projective),
    ("blocks", "blocks.simple-translation", "coset survivor rule equals the Verma route", check_simple_translation),
    ("blocks", "blocks.wall-crossing", "theta_s^2 = 2 theta_s and theta_s = b_s at q=1", check_wall_crossing),
    ("blocks", "blocks.projective-functors", "Phi_w(M_e) = P_w and KL products split into projective functors", check_projective_functors),
    ("blocks", "blocks.tilting-routes", "[Q_w : M_y] from projective multiplicities equals Phi_w(M_w0)", check_tilting),
    ("blocks", "blocks.hom-gram", "Hom(Q_x, Q_y) = Hom(P_x, P_y)", check_hom_gram),
    ("blocks", "blocks.euler-form", "Euler form on standard-filtered objects equals [P : L]", check_euler_form),
    ("blocks", "blocks.alternating-class", "the alternating Verma sum dies on every wall", check_alternating_class),
    ("blocks", "blocks.endomorphism-dimension", "dim End(antidominant projective) = dim C^W_lam", check_endomorphism_dims),
    ("soergel", "soergel.bott-samelson", "dim BS(word) = 2^len and C-module axioms", check_bott_samelson),
    ("soergel", "soergel.struktursatz", "Hom_C(BS, BS) equals the K-group Euler prediction", check_struktursatz),
    ("soergel", "soergel.splitting", "indecomposable summands match the projective decomposition", check_splitting),
]


def run_verify(type_name: str, *, tamper: str | None = None, scope: Iterable[str] | None = None,
               seed: int = DEFAULT_SEED) -> VerifyReport:
    G = weyl_group(type_name)
    conv = B.frozen_conventions()
    scale = Fraction(1)
    if tamper == "swap-cosets":
        conv = replace(conv, coset_side="right")
    elif tamper == "transpose-reciprocity":
        conv = replace(conv, reciprocity="transposed")
    elif tamper == "wrong-schubert-normalization":
        scale = Fraction(len(G))
    elif tamper is not None:
        raise ValueError(f"unknown tamper hook {tamper!r}")
    modules = set(scope) if scope else set(MODULES)
    if G.datum.name not in SOERGEL_TYPES and not scope:
        modules.discard("soergel")
    ctx = _Context(G, conv, scale, seed)
    report = VerifyReport(G.datum.name, conventions=B.frozen_conventions().describe(), tamper=tamper)
    for module, name, statement, fn in CHECKS:
        if module not in modules:
            continue
        try:
            fn(ctx)
            report.checks.append(CheckRecord(name, statement, True))
        except _Fail as exc:
            report.checks.append(CheckRecord(name, statement, False, str(exc)))
        except (B.InternalConsistencyError, B.ConventionError, ArithmeticError, KeyError, ValueError, AssertionError) as exc:
            report.checks.append(CheckRecord(name, statement, False, f"{type(exc).__name__}: {exc}"))
    return report
