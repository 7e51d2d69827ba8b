"""charquo: characteristic finite quotients of the rank-2 free group.

Two engines under one roof: braid-group orbits on quadruples over
PSL2(F_p) with permutation-group certification, and exact braid
representations of the integral quantum group over Z[q^+-1, s^+-1]
with specialization to finite fields.
"""

__version__ = "0.1.0"
