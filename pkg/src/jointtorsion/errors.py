"""Shared exception type for domain-level precondition failures.

A ``DomainError`` means the caller handed us an input outside an operation's
stated domain (singular matrix where an invertible one is required, a symbol
root on the unit circle, a non-exact sequence, ...).  Internal consistency
failures raise plain ``RuntimeError`` instead: those indicate bugs, never bad
input.
"""


class DomainError(ValueError):
    """Input violates a documented precondition."""
