"""Independent expansions used as oracles against the theta pipeline.

Everything here is straight multinomial arithmetic in the tower ring plus
exact x-adic division -- no Witt vectors, no tilts -- so these values check
the pipeline without sharing its code path.  Each function computes with one
spare p-adic digit internally: a quotient by p is canonical mod p^m only
when the numerator is known mod p^{m+1}.
"""

import math


def multinomial(*parts):
    n = sum(parts)
    out = 1
    for k in parts:
        out *= math.comb(n, k)
        n -= k
    return out


def root_sum(spec, level, mod):
    """H_level = S^{1/p^level} + T^{1/p^level} - 1 in tower coordinates."""
    a = spec.p ** (spec.N - level)
    return (
        spec.gen("s", exp=a, mod=mod)
        + spec.gen("t", exp=a, mod=mod)
        - spec.one(mod=mod)
    )


def alpha_power(spec, level, mod):
    """alpha_{p^level}^{p^level} = H_level^{p^level} / p."""
    h = root_sum(spec, level, mod + 1)
    return (h ** (spec.p ** level)).exact_divide("p").reduce_mod(mod)


def ex71_expected(spec, mod):
    """Level-1 coefficient: alpha_p^p."""
    return alpha_power(spec, 1, mod)


def _g_part(spec, mod):
    """G = (S^{p/p^2} + T^{p/p^2} - 1 - H_2^p) / p, the level-1 Witt-sum
    correction evaluated at level-2 roots.

    This is the ghost-recursion form of the multinomial block: expanding the
    division reproduces sum_* ((p-1)!/(i!j!k!)) (-1)^{i+1} T^{j/p^2} S^{k/p^2}
    plus the p=2 constant, i.e. the worked-example display up to an overall
    sign on the multinomial sum that cancels only at p=2.
    """
    p = spec.p
    a = p ** (spec.N - 2)
    h2 = root_sum(spec, 2, mod + 1)
    num = (
        spec.gen("s", exp=a * p, mod=mod + 1)
        + spec.gen("t", exp=a * p, mod=mod + 1)
        - spec.one(mod=mod + 1)
        - h2 ** p
    )
    return num.exact_divide("p").reduce_mod(mod)


def g_display_form(spec, mod):
    """The multinomial block exactly as displayed: sum_* c (-1)^i T^{j}S^{k} + [p=2]."""
    p = spec.p
    a = p ** (spec.N - 2)
    total = spec.zero(mod=mod)
    for i in range(p):
        for j in range(p):
            k = p - i - j
            if k < 0 or k >= p:
                continue
            c = (multinomial(i, j, k) // p) * (-1) ** i
            total = total + spec.monomial("char0", mod, c, t=j * a, s=k * a)
    if p == 2:
        total = total + spec.one(mod=mod)
    return total


def beta_p_pow_p(spec, mod):
    """beta_p^p expanded term by term through integral x-power shifts.

    beta_p = G + alpha_{p^2}^p contains the non-representable alpha_{p^2}^p,
    but each binomial term of beta_p^p = sum_i C(p,i) G^{p-i} (H_2^p/p^{1/p})^i
    clears its fractional p-power against the binomial coefficient.
    """
    p, N = spec.p, spec.N
    mm = mod + 1
    g = _g_part(spec, mm)
    h2 = root_sum(spec, 2, mm)
    total = g ** p
    for i in range(1, p):
        c = math.comb(p, i)
        assert c % p == 0
        shift = p ** N - i * p ** (N - 1)  # p / p^{i/p} as an x-power
        term = (g ** (p - i)) * (h2 ** (p * i))
        term = term.scale_int(c // p).mul_x_power(shift)
        total = total + term
    total = total + (h2 ** (p * p)).exact_divide("p")
    return total.reduce_mod(mod)


def ex72_expected(spec, mod):
    """Level-2 coefficient: alpha_{p^2}^{p^2} + beta_p^p."""
    return alpha_power(spec, 2, mod) + beta_p_pow_p(spec, mod)


def b_bracket(spec, mod):
    """B = T^{1/4} S^{1/4} - T^{1/4} - S^{1/4} + 1 (p = 2 only)."""
    a = spec.p ** (spec.N - 2)
    return (
        spec.monomial("char0", mod, 1, t=a, s=a)
        - spec.gen("t", exp=a, mod=mod)
        - spec.gen("s", exp=a, mod=mod)
        + spec.one(mod=mod)
    )


def ex72_expected_p2_form(spec, mod):
    """2*alpha_2^2 + 2*alpha_2*B + (2*sqrt(2)+1)*B^2 for p = 2."""
    assert spec.p == 2
    mm = mod + 1
    half = spec.p ** (spec.N - 1)
    h1 = root_sum(spec, 1, mm)
    b = b_bracket(spec, mm)
    alpha2_sq_twice = (h1 ** 2).exact_divide("p").scale_int(2)
    cross = (h1 * b).mul_x_power(half)  # 2 * alpha_2 * B = 2^{1/2} H_1 B
    unit = spec.gen("x", exp=half, mod=mm).scale_int(2) + spec.one(mod=mm)
    return (alpha2_sq_twice + cross + unit * b * b).reduce_mod(mod)


def cyclotomic_expected(spec, mod):
    """(1 - xi_p')^p / p for the inverse-seed primitive root xi_p' = w^{-p^{Dw-1}};
    identical to (xi_p - 1)^p / p for the seeded root, since xi^p = 1."""
    p = spec.p
    if p == 2:
        # Ex 7.5 value: xi_4
        return spec.gen("w", exp=2 ** (spec.Dw - 2), mod=mod)
    mm = mod + 1
    xi_inv_exp = p ** (spec.Dw - 1) * (p - 1)  # w^{-p^{Dw-1}} = w^{phi}
    one_minus = spec.one(mod=mm) - spec.gen("w", exp=xi_inv_exp, mod=mm)
    return (one_minus ** p).exact_divide("p").reduce_mod(mod)


def cyclotomic_seed_root_form(spec, mod):
    """(xi_p - 1)^p / p with xi_p the seeded root w^{p^{Dw-1}} (p odd)."""
    p = spec.p
    mm = mod + 1
    diff = spec.gen("w", exp=p ** (spec.Dw - 1), mod=mm) - spec.one(mod=mm)
    return (diff ** p).exact_divide("p").reduce_mod(mod)
