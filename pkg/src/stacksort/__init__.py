"""Lower bounds on the number of stacks in series needed to sort n elements.

Modules:
  game         move strings acting on stack-system states
  perms        brute-force generable and sortable permutations, k_n
  relations    discovering and checking string relations
  poly, gf     exact polynomials and cluster generating functions
  asymptotics  growth rates, weight optimization and bound constants
  cli          the command-line pipeline
"""

__version__ = "0.1.0"
