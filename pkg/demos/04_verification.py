"""
Checking every claim mechanically
=================================

The verify module turns each structural statement about f into an explicit
numerical check and returns a report with the parameters used, a one-line
summary and any counterexamples.
"""
# %%
import json

from twisted_cheeger import verify as ver

# %% run the whole registry
for r in ver.run_all():
    print(f"{'PASS' if r.passed else 'FAIL'}  {r.claim_id:<14} {r.details}")

# %% one report in full, with a different seed
print(json.dumps(ver.check_claim("lemma33", seed=7, n_draws=1000).to_dict(), indent=2))

# %% the zero counter on its own: sinh(2x) - 3 sinh(x) vanishes once, at arccosh(3/2)
print(ver.sinh_combination_zeros(1.0, -3.0, 0.0, 2.0, 1.0, 0.5, 10.0))
