"""Catalog of generalized and master symmetries, Volterra links and combiners.

Every catalog entry in the U picture is written against an *axis view*:
``w(k)`` reads the field ``k`` steps along the entry's lattice direction and
``c`` is the gauge constant of that direction (alpha0 along n, beta0 along m).
The n-class and m-class formulas are therefore the same code with the roles
of the directions exchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InconsistentFit, NotProportional, UnknownName, ZeroResidual
from .lattice import U, QuadParams
from .numerics import RATIONAL, derivative, safe_div, seed
from .sampling import generator, random_field, random_onshell_window
from .symmetry import (
    Characteristic,
    bracket,
    linear_combination,
    on_shell_residual,
    point_characteristic,
    stencil_box,
)

__all__ = [
    "CatalogEntry",
    "CATALOG_NAMES",
    "catalog_get",
    "miura_a",
    "miura_a_tilde",
    "VolterraField",
    "volterra_rhs",
    "volterra2_rhs",
    "volterra_noniso_rhs",
    "miura_intertwine_residual",
    "miura_flow_constant",
    "swap_nm",
    "combine_with_swap",
    "SwapCombination",
    "master_bracket_constant",
    "BracketFit",
    "semi_discrete_ratio",
    "onshell_samples",
]

ISOSPECTRAL = "isospectral"
NONISO_LOCAL = "non-isospectral-local"
MASTER = "master"
MIXED_KIND = "mixed"
POINT = "point"


# -- axis-generic formulas --------------------------------------------------


def _s1(w, c):
    num = 4 * (w(0) - w(-1) + c) * (w(0) - w(1) - c)
    return safe_div(num, w(1) - w(-1) + 2 * c, "u[+1] - u[-1] + 2c")


def _s2(w, c):
    pre = safe_div(
        (w(0) - w(-1) + c) * (w(0) - w(1) - c),
        (w(1) - w(-1) + 2 * c) ** 2,
        "u[+1] - u[-1] + 2c",
    )
    right = safe_div(
        (w(2) - w(1) + c) * (w(-1) - w(0) - c), w(2) - w(0) + 2 * c, "u[+2] - u[0] + 2c"
    )
    left = safe_div(
        (w(-1) - w(-2) + c) * (w(0) - w(1) - c), w(0) - w(-2) + 2 * c, "u[0] - u[-2] + 2c"
    )
    return pre * (right + left)


def _along_n(u):
    return lambda k: u(k, 0)


def _along_m(u):
    return lambda k: u(0, k)


def _axis_stencil(radius, axis):
    if axis == "n":
        return tuple((k, 0) for k in range(-radius, radius + 1))
    return tuple((0, k) for k in range(-radius, radius + 1))


def _build(name, params):
    a0, b0 = params.alpha0, params.beta0
    if name == "S1n":
        return _axis_stencil(1, "n"), lambda n, m, u: _s1(_along_n(u), a0)
    if name == "S1m":
        return _axis_stencil(1, "m"), lambda n, m, u: _s1(_along_m(u), b0)
    if name == "S2n":
        return _axis_stencil(2, "n"), lambda n, m, u: _s2(_along_n(u), a0)
    if name == "S2m":
        return _axis_stencil(2, "m"), lambda n, m, u: _s2(_along_m(u), b0)
    if name == "G0n":
        return ((0, 0),), lambda n, m, u: u(0, 0) + a0 * n
    if name == "G0m":
        return ((0, 0),), lambda n, m, u: u(0, 0) + b0 * m
    if name == "M1n":
        return _axis_stencil(1, "n"), lambda n, m, u: n * _s1(_along_n(u), a0)
    if name == "M1m":
        return _axis_stencil(1, "m"), lambda n, m, u: m * _s1(_along_m(u), b0)
    if name == "MIXED":
        st = tuple(sorted(set(_axis_stencil(1, "n")) | set(_axis_stencil(1, "m"))))
        return st, lambda n, m, u: n * _s1(_along_n(u), a0) + m * _s1(_along_m(u), b0)
    raise UnknownName(name)


_KINDS = {
    "S1n": ISOSPECTRAL,
    "S2n": ISOSPECTRAL,
    "S1m": ISOSPECTRAL,
    "S2m": ISOSPECTRAL,
    "G0n": NONISO_LOCAL,
    "G0m": NONISO_LOCAL,
    "M1n": MASTER,
    "M1m": MASTER,
    "MIXED": MIXED_KIND,
    "X0": POINT,
    "X1": POINT,
    "X2": POINT,
}
CATALOG_NAMES = tuple(_KINDS)

_PARTNER = {
    "S1n": "S1m", "S2n": "S2m", "G0n": "G0m", "M1n": "M1m", "MIXED": "MIXED",
    "X0": "X0", "X1": "X1", "X2": "X2",
}
_PARTNER.update({v: k for k, v in list(_PARTNER.items())})

_DEFAULT_PARAMS = QuadParams(Fraction(4), Fraction(1), Fraction(1), Fraction(1, 2))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    characteristic: Characteristic
    kind: str
    params: QuadParams
    swapped: bool = field(default=False, compare=False)

    @property
    def picture(self):
        return self.characteristic.picture

    def rebind(self, params):
        """The same entry for other parameters (swap state preserved)."""
        if self.swapped:
            return swap_nm(catalog_get(_PARTNER[self.name], params.swapped()))
        return catalog_get(self.name, params)


def catalog_get(name, params=None):
    """Catalog entry ``name`` bound to ``params`` (default alpha1=4, alpha2=1,
    alpha0=1, beta0=1/2)."""
    if name not in _KINDS:
        raise UnknownName(name)
    params = params or _DEFAULT_PARAMS
    if name.startswith("X"):
        coeffs = [0] * int(name[1]) + [1]
        ch = point_characteristic(coeffs, name=name, params=params)
        return CatalogEntry(name, ch, POINT, params)
    params.check_constraint()
    stencil, func = _build(name, params)
    return CatalogEntry(name, Characteristic(name, stencil, func, params, U), _KINDS[name], params)


def swap_nm(entry):
    """Image of an entry under n <-> m together with alpha1 <-> alpha2.

    The transformed field is ``F'(n, m; u) = F(m, n; u transposed)`` and it
    is labelled with the swapped parameters. The image of an n-class entry
    built for ``P`` is the m-class entry built for ``P.swapped()``.
    """
    ch = entry.characteristic
    func = ch.func

    def swapped_func(n, m, u):
        return func(m, n, lambda dn, dm: u(dm, dn))

    partner = _PARTNER[entry.name]
    new_params = entry.params.swapped() if entry.params.has_gauge else QuadParams(
        entry.params.alpha2, entry.params.alpha1
    )
    stencil = tuple(sorted((dm, dn) for dn, dm in ch.stencil))
    new_ch = Characteristic(partner, stencil, swapped_func, new_params, ch.picture)
    return CatalogEntry(partner, new_ch, entry.kind, new_params, not entry.swapped)


# -- Miura map and the Volterra hierarchy ----------------------------------


def _miura(w, c):
    return safe_div(
        4 * (w(1) - w(0) + c) ** 2,
        (w(2) - w(0) + 2 * c) * (w(1) - w(-1) + 2 * c),
        "(u[+2] - u[0] + 2c)(u[+1] - u[-1] + 2c)",
    )


def miura_a(params, window, n, m):
    """Volterra field ``a`` at (n, m) built from a U-picture field along n."""
    return _miura(lambda k: window[n + k, m], params.alpha0)


def miura_a_tilde(params, window, n, m):
    """Mirror of :func:`miura_a` along m with beta0."""
    return _miura(lambda k: window[n, m + k], params.beta0)


@dataclass(frozen=True)
class VolterraField:
    """One-dimensional field ``a_k`` stored from index ``offset`` on."""

    values: tuple
    offset: int = 0
    axis: str = "n"

    def __getitem__(self, k):
        i = k - self.offset
        if not 0 <= i < len(self.values):
            raise IndexError(f"a[{k}] outside {self.offset}..{self.offset + len(self.values) - 1}")
        return self.values[i]


def volterra_rhs(a, k):
    """``a_k (a_{k+1} - a_{k-1})``."""
    return a[k] * (a[k + 1] - a[k - 1])


def volterra2_rhs(a, k):
    """Next isospectral Volterra flow."""
    return a[k] * (
        a[k - 1] * (a[k - 2] + a[k - 1] + a[k] - 4) - a[k + 1] * (a[k + 2] + a[k + 1] + a[k] - 4)
    )


def volterra_noniso_rhs(a, k, n=None):
    """Local non-isospectral Volterra flow; ``n`` is the lattice site (default k)."""
    n = k if n is None else n
    return a[k] * (a[k] - (n - 1) * a[k - 1] + (n + 2) * a[k + 1] - 4)


_MIURA_TARGETS = {
    "S1n": (volterra_rhs, 1),
    "S2n": (volterra2_rhs, 2),
    "M1n": (volterra_noniso_rhs, 1),
}


def _miura_derivative(params, window, n, m, char):
    """d a_n / d eps when every u-site moves with ``char``."""
    seeded = seed(0)
    # moving field: u_k + eps*F_k, differentiated at eps = 0
    def moved(k):
        return window[n + k, m] + seeded * char(window, n + k, m)

    return derivative(_miura(moved, params.alpha0), seeded)


def _image_field(params, window, n, m, reach):
    ks = range(n - reach, n + reach + 1)
    return VolterraField(tuple(miura_a(params, window, k, m) for k in ks), n - reach)


def _intertwine_parts(params, window, n, m, flow, scale):
    if flow not in _MIURA_TARGETS:
        raise UnknownName(flow)
    target, reach = _MIURA_TARGETS[flow]
    char = catalog_get(flow, params).characteristic
    lhs = scale * _miura_derivative(params, window, n, m, char)
    a = _image_field(params, window, n, m, reach)
    rhs = target(a, n) if target is not volterra_noniso_rhs else target(a, n, n)
    return lhs, rhs


def miura_intertwine_residual(params, window, n, m, flow="S1n", scale=1):
    """``d a/d eps`` along ``scale * flow`` minus the matching Volterra flow.

    The image field ``a`` is taken along n at row m. Needs the window to
    cover ``n - 2 .. n + 3`` (``n - 3 .. n + 4`` for S2n) at row m.
    """
    lhs, rhs = _intertwine_parts(params, window, n, m, flow, scale)
    return lhs - rhs


def miura_flow_constant(params, window, n, m, flow="S1n"):
    """Ratio ``(d a/d eps) / target`` at one site, or None where the target vanishes."""
    lhs, rhs = _intertwine_parts(params, window, n, m, flow, 1)
    if rhs == 0:
        return None
    return lhs / rhs


# -- combining with the swap image, master-symmetry brackets ---------------


def onshell_samples(params, rng, char, count, pad=0, magnitude=None):
    """Yield ``(window, n, m)``: exactly on-shell U-picture windows covering
    everything :func:`on_shell_residual` of ``char`` reads at a random root."""
    (n0, n1), (m0, m1) = stencil_box(char)
    for _ in range(count):
        # random root so that explicit n, m dependence is exercised
        rn, rm = (int(v) for v in rng.integers(-5, 6, size=2))
        w = random_onshell_window(
            params, rng, (rn + n0 - pad, rn + n1 + pad), (rm + m0 - pad, rm + m1 + pad), U,
            magnitude=magnitude,
        )
        yield w, rn, rm


@dataclass(frozen=True)
class SwapCombination:
    entry: CatalogEntry
    a: object
    b: object
    ratio_samples: int

    def to_record(self):
        from .numerics import format_scalar

        return {
            "name": self.entry.name,
            "a": format_scalar(self.a),
            "b": format_scalar(self.b),
            "samples": self.ratio_samples,
        }


def combine_with_swap(zn, params=None, trials=10, seed=0):
    """Combine ``zn`` with its n<->m image into a symmetry.

    With ``r_n`` and ``r_m`` the on-shell residuals of ``zn`` and of its image
    (rebound to the same parameters), the ratio ``b = r_m / r_n`` must be one
    constant over all trials; ``a`` is normalized to 1. The result is
    ``zn - (1/b) * zm``.
    """
    params = params or zn.params
    zn = zn.rebind(params)
    zm = swap_nm(zn.rebind(params.swapped()))
    rng = generator(seed)
    span = linear_combination([(1, zn.characteristic), (1, zm.characteristic)], "span")
    ratio = None
    nonzero = 0
    for w, rn, rm in onshell_samples(params, rng, span, trials):
        rn_val = on_shell_residual(zn.characteristic, params, w, rn, rm)
        rm_val = on_shell_residual(zm.characteristic, params, w, rn, rm)
        if rn_val == 0:
            if rm_val != 0:
                raise InconsistentFit(f"image residual {rm_val} where the original vanishes")
            continue
        nonzero += 1
        r = rm_val / rn_val
        if ratio is None:
            ratio = r
        elif r != ratio:
            raise InconsistentFit(f"residual ratios {ratio} and {r} differ")
    if ratio is None:
        raise ZeroResidual(f"{zn.name} has zero on-shell residual; it is already a symmetry")
    b = ratio
    ch = linear_combination(
        [(1, zn.characteristic), (-1 / b, zm.characteristic)],
        f"{zn.name}-(1/b){zm.name}",
    )
    name = "MIXED" if zn.name in ("M1n", "M1m") and b == -1 else ch.name
    entry = CatalogEntry(name, ch, MIXED_KIND, params)
    return SwapCombination(entry, 1, b, nonzero)


@dataclass(frozen=True)
class BracketFit:
    constant: object
    samples: int
    zero_bracket: bool
    kind: str

    def to_record(self):
        from .numerics import format_scalar

        return {
            "constant": format_scalar(self.constant),
            "samples": self.samples,
            "zero_bracket": self.zero_bracket,
            "kind": self.kind,
        }


def master_bracket_constant(master, s_low, s_high, points=50, seed=0, on_shell=False,
                            params=None):
    """Fit ``c`` with ``[master, s_low] = c * s_high`` pointwise.

    Evaluation points are random rational fields (on-shell windows when
    ``on_shell``) at random sites. An identically zero bracket is reported
    with ``zero_bracket=True`` and ``c = 0``.
    """
    params = params or master.params
    br = bracket(master.characteristic, s_low.characteristic)
    rng = generator(seed)
    st = set(br.stencil) | set(s_high.characteristic.stencil)
    rn_ = max(abs(d) for p in st for d in p)
    c = None
    all_zero = True
    for _ in range(points):
        n, m = (int(v) for v in rng.integers(-5, 6, size=2))
        rng_n, rng_m = (n - rn_, n + rn_ + 1), (m - rn_, m + rn_ + 1)
        if on_shell:
            w = random_onshell_window(params, rng, rng_n, rng_m, U)
        else:
            w = random_field(rng, rng_n, rng_m, U)
        num = br(w, n, m)
        den = s_high.characteristic(w, n, m)
        if num != 0:
            all_zero = False
        if den == 0:
            if num != 0:
                raise NotProportional(f"bracket {num} where {s_high.name} vanishes")
            continue
        r = num / den
        if c is None:
            c = r
        elif r != c:
            raise NotProportional(f"ratios {c} and {r} differ")
    if all_zero:
        return BracketFit(0, points, True, RATIONAL)
    return BracketFit(c, points, False, RATIONAL)


def semi_discrete_ratio(params, window, n, m, p):
    """``S1n / rhs`` where rhs is the differential-difference right-hand side
    ``2 (x+ - x)(x- - x) / (p (x- - x+))`` of the X-picture field along n."""
    s1 = catalog_get("S1n", params).characteristic(window, n, m)
    x = [window[n + k, m] + params.alpha0 * (n + k) + params.beta0 * m for k in (-1, 0, 1)]
    rhs = 2 * (x[2] - x[1]) * (x[0] - x[1]) / (p * (x[0] - x[2]))
    return s1 / rhs
