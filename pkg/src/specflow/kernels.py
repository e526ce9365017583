"""Backend selection for the hot partial-sum kernels.

The compiled extension is used when it was built; set
``SPECFLOW_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _kernels_py

python_dirichlet_sum = _kernels_py.dirichlet_sum
python_dirichlet_sum_real = _kernels_py.dirichlet_sum_real
python_phase_table = _kernels_py.phase_table
python_phased_sum = _kernels_py.phased_sum

try:
    from ._kernels import dirichlet_sum as compiled_dirichlet_sum
    from ._kernels import dirichlet_sum_real as compiled_dirichlet_sum_real
    from ._kernels import phase_table as compiled_phase_table
    from ._kernels import phased_sum as compiled_phased_sum
except ImportError:  # extension not built
    compiled_dirichlet_sum = None
    compiled_dirichlet_sum_real = None
    compiled_phase_table = None
    compiled_phased_sum = None

if compiled_dirichlet_sum is not None and os.environ.get("SPECFLOW_PURE_PYTHON", "") not in ("1", "true", "yes"):
    BACKEND = "compiled"
    dirichlet_sum = compiled_dirichlet_sum
    dirichlet_sum_real = compiled_dirichlet_sum_real
    phase_table = compiled_phase_table
    phased_sum = compiled_phased_sum
else:
    BACKEND = "python"
    dirichlet_sum = python_dirichlet_sum
    dirichlet_sum_real = python_dirichlet_sum_real
    phase_table = python_phase_table
    phased_sum = python_phased_sum
