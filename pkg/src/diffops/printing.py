"""Canonical text form and structured records for all value types.

The term order in printed output is graded (total degree, with deg2 used
for algebra elements and 2s+|K|+|L| added for operators), highest first,
ties broken by ascending lexicographic key.  Identical values always print
identically, and parsing a printed form recovers the value exactly.
"""

from __future__ import annotations


def _format_scalar(field, c) -> str:
    return field.format(c)


def _coeff_prefix(field, c, factors: list[str]) -> str:
    """Render coefficient c times a (possibly empty) monomial factor list."""
    body = "*".join(factors)
    s = _format_scalar(field, c)
    if not body:
        return s
    if s == "1":
        return body
    if s == "-1" and field.characteristic == 0:
        return f"-{body}"
    return f"{s}*{body}"


def _split_sign(field, c):
    """Return (is_negative, absolute value) for display purposes."""
    if field.characteristic == 0 and c < 0:
        return True, -c
    return False, c


def _join_terms(field, rendered: list[tuple[bool, str]]) -> str:
    if not rendered:
        return "0"
    parts = []
    for i, (neg, text) in enumerate(rendered):
        if i == 0:
            parts.append(f"-{text}" if neg else text)
        else:
            parts.append(f"- {text}" if neg else f"+ {text}")
    return " ".join(parts)


def _power(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


def _dsym(name: str, e: int) -> str:
    return name if e == 1 else f"{name}[{e}]"


# -- algebra elements ---------------------------------------------------------


def _element_factors(ctx, key) -> list[str]:
    m, I, J = key
    out = []
    if m:
        out.append(_power("h", m))
    for i, e in enumerate(I, start=1):
        if e:
            out.append(_power(f"x{i}", e))
    for i, e in enumerate(J, start=1):
        if e:
            out.append(_power(f"y{i}", e))
    return out


def _neg(t):
    return tuple(-e for e in t)


def _element_sort_key(key):
    m, I, J = key
    return (-(2 * m + sum(I) + sum(J)), m, _neg(I), _neg(J))


def format_element(a) -> str:
    field = a.ctx.field
    rendered = []
    for key in sorted(a.terms, key=_element_sort_key):
        neg, c = _split_sign(field, a.terms[key])
        rendered.append((neg, _coeff_prefix(field, c, _element_factors(a.ctx, key))))
    return _join_terms(field, rendered)


def element_records(a) -> list[dict]:
    field = a.ctx.field
    return [
        {
            "coeff": _format_scalar(field, a.terms[key]),
            "m": key[0],
            "I": list(key[1]),
            "J": list(key[2]),
        }
        for key in sorted(a.terms, key=_element_sort_key)
    ]


# -- differential operators on H_n -------------------------------------------


def _operator_factors(ctx, key) -> list[str]:
    m, I, J, s, K, L = key
    out = _element_factors(ctx, (m, I, J))
    if s:
        out.append(_dsym("dh", s))
    for i, e in enumerate(K, start=1):
        if e:
            out.append(_dsym(f"dx{i}", e))
    for i, e in enumerate(L, start=1):
        if e:
            out.append(_dsym(f"dy{i}", e))
    return out


def _operator_sort_key(key):
    m, I, J, s, K, L = key
    grade = 2 * m + sum(I) + sum(J) + 2 * s + sum(K) + sum(L)
    return (-grade, m, _neg(I), _neg(J), s, _neg(K), _neg(L))


def format_operator(d) -> str:
    field = d.ctx.field
    rendered = []
    for key in sorted(d.terms, key=_operator_sort_key):
        neg, c = _split_sign(field, d.terms[key])
        rendered.append((neg, _coeff_prefix(field, c, _operator_factors(d.ctx, key))))
    return _join_terms(field, rendered)


def operator_records(d) -> list[dict]:
    field = d.ctx.field
    return [
        {
            "coeff": _format_scalar(field, d.terms[key]),
            "m": key[0],
            "I": list(key[1]),
            "J": list(key[2]),
            "s": key[3],
            "K": list(key[4]),
            "L": list(key[5]),
        }
        for key in sorted(d.terms, key=_operator_sort_key)
    ]


# -- polynomials and polynomial differential operators ------------------------


def _poly_factors(ring, exps) -> list[str]:
    return [
        _power(name, e) for name, e in zip(ring.variables, exps) if e
    ]


def _poly_sort_key(exps):
    return (-sum(exps), _neg(exps))


def format_poly(f) -> str:
    field = f.ring.field
    rendered = []
    for exps in sorted(f.terms, key=_poly_sort_key):
        neg, c = _split_sign(field, f.terms[exps])
        rendered.append((neg, _coeff_prefix(field, c, _poly_factors(f.ring, exps))))
    return _join_terms(field, rendered)


def _pdop_factors(ring, key) -> list[str]:
    beta, alpha = key
    out = _poly_factors(ring, beta)
    for name, e in zip(ring.variables, alpha):
        if e:
            base = f"d[{name}]"
            out.append(base if e == 1 else f"{base}^[{e}]")
    return out


def _pdop_sort_key(key):
    beta, alpha = key
    return (-(sum(beta) + sum(alpha)), _neg(beta), alpha)


def format_pdop(d) -> str:
    field = d.ring.field
    rendered = []
    for key in sorted(d.terms, key=_pdop_sort_key):
        neg, c = _split_sign(field, d.terms[key])
        rendered.append((neg, _coeff_prefix(field, c, _pdop_factors(d.ring, key))))
    return _join_terms(field, rendered)


def pdop_records(d) -> list[dict]:
    field = d.ring.field
    return [
        {
            "coeff": _format_scalar(field, d.terms[key]),
            "beta": list(key[0]),
            "alpha": list(key[1]),
        }
        for key in sorted(d.terms, key=_pdop_sort_key)
    ]
