from .completion import CompletionCertificate, qs_transform
from .patching import Patch, assemble_patches, build_patch, eliminate_variable
from .preparation import (
    NoetherPreparation,
    YSampling,
    bezout_lift_xn,
    cyclic_matrix,
    noether_prepare,
    sample_y_matrices,
)
from .reduction import complete_constant, elementary_reduce
