"""Exact invariants of gl(m|n) from characteristic identities, checked against explicit modules."""
