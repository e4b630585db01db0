"""Single place for the numerical comparison policy.

Deciders treat ``a >= b`` as ``a >= b - DECISION_TOL`` (one-sided), so
exact-boundary cases decide as convertible.  The LP oracle uses the looser
FEASIBILITY_TOL so oracle/decider verdicts do not flap at shared boundaries;
margins inside TIE_MARGIN are logged as ties, never counted as disagreements.
"""

DECISION_TOL = 1e-9
NORM_TOL = 1e-10
SVD_TOL = 1e-12
CLIP_NEG = -1e-12
FEASIBILITY_TOL = 1e-8
TIE_MARGIN = 1e-7
