from .perm import register as register_perm
from .kernel import register as register_kernel
from .counterexample import register as register_counterexample
from .distance import register as register_distance
from .verify import register as register_verify

REGISTRARS = (register_perm, register_kernel, register_counterexample, register_distance, register_verify)
