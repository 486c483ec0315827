"""
Printed closed forms against the oracle
=======================================

Several closed forms that circulate for these quantities disagree with an
exact calculation.  Each one is measured here with the Fock oracle; the
packaged ERRATA.md has the full table.
"""

from tmq import verify

for e in verify.measure_errata():
    flag = "confirmed" if e.confirmed else "NOT confirmed"
    print(f"{e.id}: {e.quantity}")
    print(f"    printed {e.printed:.9g}   measured {e.measured:.9g}   exact {e.exact:.9g}   ({flag})")

print()
print(verify.errata_document())
