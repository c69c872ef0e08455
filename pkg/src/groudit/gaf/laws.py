"""Equational laws of the span bicategory, as boolean checks."""

from __future__ import annotations

from .profunctor import (
    Profunctor,
    Protransformation,
    adjoint,
    associator,
    cap,
    compose_all,
    compose_horizontal,
    compose_horizontal_profunctors,
    compose_horizontal_sum_form,
    compose_vertical,
    cup,
    dagger,
    identity_span,
    left_unitor,
    right_unitor,
)


def interchange(s1: Protransformation, s2: Protransformation,
                t1: Protransformation, t2: Protransformation) -> bool:
    """(s2 s1) ; (t2 t1) == (s2 ; t2)(s1 ; t1)."""
    lhs = compose_horizontal(compose_vertical(s1, s2), compose_vertical(t1, t2))
    rhs = compose_vertical(compose_horizontal(s1, t1), compose_horizontal(s2, t2))
    return lhs == rhs


def pentagon(p: Profunctor, q: Profunctor, r: Profunctor, s: Profunctor) -> bool:
    pq = compose_horizontal_profunctors(p, q)
    qr = compose_horizontal_profunctors(q, r)
    rs = compose_horizontal_profunctors(r, s)
    top = compose_vertical(associator(pq, r, s), associator(p, q, rs))
    bottom = compose_all(
        compose_horizontal(associator(p, q, r), identity_span(s)),
        associator(p, qr, s),
        compose_horizontal(identity_span(p), associator(q, r, s)),
    )
    return top == bottom


def triangle(p: Profunctor, q: Profunctor) -> bool:
    from .profunctor import identity_profunctor

    one = identity_profunctor(p.target)
    lhs = compose_vertical(associator(p, one, q), compose_horizontal(identity_span(p), left_unitor(q)))
    rhs = compose_horizontal(right_unitor(p), identity_span(q))
    return lhs == rhs


def snake(p: Profunctor) -> bool:
    """P -> P;1 -> P;(P*;P) -> (P;P*);P -> 1;P -> P is the identity."""
    pa = adjoint(p)
    z = compose_all(
        dagger(right_unitor(p)),
        compose_horizontal(identity_span(p), cup(p)),
        dagger(associator(p, pa, p)),
        compose_horizontal(cap(p), identity_span(p)),
        left_unitor(p),
    )
    return z == identity_span(p)


def snake_adjoint(p: Profunctor) -> bool:
    """P* -> 1;P* -> (P*;P);P* -> P*;(P;P*) -> P*;1 -> P* is the identity."""
    pa = adjoint(p)
    z = compose_all(
        dagger(left_unitor(pa)),
        compose_horizontal(cup(p), identity_span(pa)),
        associator(pa, p, pa),
        compose_horizontal(identity_span(pa), cap(p)),
        right_unitor(pa),
    )
    return z == identity_span(pa)


def dagger_antihomomorphism(s: Protransformation, t: Protransformation) -> bool:
    """(t s)^† == s^† t^†, and the dagger is an involution."""
    return (dagger(compose_vertical(s, t)) == compose_vertical(dagger(t), dagger(s))
            and dagger(dagger(s)) == s)


def dagger_horizontal(s: Protransformation, t: Protransformation) -> bool:
    return dagger(compose_horizontal(s, t)) == compose_horizontal(dagger(s), dagger(t))


def freeness_preserved(p: Profunctor, q: Profunctor) -> bool:
    """Composites and adjoints of free profunctors are free (validate raises otherwise)."""
    from .profunctor import FreenessError

    try:
        compose_horizontal_profunctors(p, q).validate()
        adjoint(p).validate()
        adjoint(q).validate()
    except FreenessError:
        return False
    return True


def horizontal_forms_agree(s: Protransformation, t: Protransformation) -> bool:
    return compose_horizontal(s, t) == compose_horizontal_sum_form(s, t)
