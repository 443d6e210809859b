from .formulas import (
    BoundFormula,
    DegreeBudget,
    bound_table,
    budget_for_instance,
    check_consistency_chain,
    evaluate_bound,
    qs_explicit_bound,
)
