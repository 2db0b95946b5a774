"""smtop: exact verification of finite statistical metric spaces and the
generalized topologies they induce."""

__version__ = "0.1.0"

from .distfn import DistFn, TailFn, multiply, one, ramp, step, tail, validate
from .tnorm import TNorm, check_axioms, minimum_tnorm, product_tnorm, table_tnorm

__all__ = [
    "DistFn", "TailFn", "multiply", "one", "ramp", "step", "tail", "validate",
    "TNorm", "check_axioms", "minimum_tnorm", "product_tnorm", "table_tnorm",
]
