"""satrpm: generative abstract reasoning on Raven-style matrix puzzles.

Panels are abstracted into discrete propositional codes by a learned
codebook, the answer's codes are inferred by a differentiable MAXSAT
(unit-vector SDP) reasoning layer, and the answer image is reconstructed by
a decoder. Trained end to end on synthetic rule-governed puzzle datasets.
"""

from .kernels import backend_name

__version__ = "0.1.0"

__all__ = ["backend_name", "__version__"]
