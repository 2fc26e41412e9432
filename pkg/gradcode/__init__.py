"""
gradcode

Gradient coding with partial recovery:
- Scheme data model and load metrics (core)
- Builders for every scheme family (constructions)
- Master-side decoders with exact recovery certificates (decoding)
- Exact feasibility oracle and lower bounds (feasibility)
- Order-statistic delay models (delay_models)
- Master-worker gradient descent simulator (sgd_sim)
"""

__version__ = "0.1.0"
