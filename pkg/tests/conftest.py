import os

import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

from qca_lab.fpoly import LaurentPoly

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("fast", max_examples=10, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def polys(dim=1, max_exp=4, max_terms=6):
    exps = st.tuples(*[st.integers(-max_exp, max_exp)] * dim)
    return st.lists(exps, max_size=max_terms).map(lambda ts: LaurentPoly(ts, dim))


def palindromic_polys(max_deg=3, max_terms=5):
    """Palindromic one-variable polynomials built from 1 and u^m + u^-m."""
    def build(parts):
        const, ms = parts
        terms = [(0,)] if const else []
        for m in ms:
            terms += [(m,), (-m,)]
        return LaurentPoly(terms)
    return st.tuples(st.booleans(), st.sets(st.integers(1, max_deg), max_size=max_terms // 2)).map(build)
