"""Global resource limits.

Every construction that can blow up combinatorially (powers, congruence
lattices, subpower searches) checks against these caps and raises
:class:`~commeq.errors.CapacityExceeded` or :class:`~commeq.errors.BudgetExceeded`
instead of truncating.  Override by assignment, e.g. ``config.MAX_UNIVERSE = 2**22``.
"""

MAX_UNIVERSE = 2**20          # elements of a product / matrix power
MAX_TABLE_ENTRIES = 2**24     # total table entries materialized by product()
MAX_CONGRUENCES = 100_000     # size of an enumerated congruence lattice
MAX_ASSIGNMENTS = 10**6       # assignments scanned by check_eq_exhaustive
MAX_TUPLES = 10**7            # tuples scanned by commutator-equation checks
MAX_SUBPOWER = 200_000        # elements of a generated subpower in term search
MAX_SEARCH_NODES = 10**6      # backtracking nodes in term search
MAX_CLOSURE_STEPS = 5 * 10**7  # operation applications per subpower in term search
