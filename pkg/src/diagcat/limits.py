"""Size guards.

All computation is exact, so the only resource limits are combinatorial:
the number of tensor cells a dense enumeration may touch, the number of
edge subsets an expansion may visit, and iteration caps on generators.
The tensor cap can be raised through the environment variable
``DIAGCAT_TENSOR_CAP`` (a plain integer).
"""

import os

# N**(k+l) cells; 4**10 admits (0,8) tensors at N=4, larger sizes are opt-in.
DEFAULT_TENSOR_CAP = 4**10

# 2**|E| terms in edge-subset expansions.
DEFAULT_EDGE_SUBSET_CAP = 24

# Canonical-pattern states visited by the word-rewriting cycle search.
DEFAULT_WORD_STATE_CAP = 10**6

# Sweeps of the enumeration fixpoint loop before declaring a bug.
DEFAULT_ITERATION_CAP = 64

# Largest k0 the command line accepts without an explicit override.
DEFAULT_K0_CAP = 10


def tensor_cap() -> int:
    value = os.environ.get("DIAGCAT_TENSOR_CAP")
    if value is None:
        return DEFAULT_TENSOR_CAP
    return int(value)


def check_tensor_size(n_cells: int) -> None:
    from .errors import GuardError

    cap = tensor_cap()
    if n_cells > cap:
        raise GuardError(
            f"dense tensor enumeration of {n_cells} cells exceeds cap {cap}; "
            "raise DIAGCAT_TENSOR_CAP to allow it"
        )
