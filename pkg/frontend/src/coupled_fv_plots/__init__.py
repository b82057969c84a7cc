"""Figure rendering for coupled-fv output files (profiles, cubic-root
diagrams, convergence plots); consumes only the solver CLI's documented
CSV/JSON formats."""

from .figures import render_convergence, render_profile, render_roots
from .io import SchemaError

__version__ = "0.1.0"
