from enum import Enum, IntEnum

# Numerical defaults shared by ModelSpec and RunConfig
DIFFUSE_SCALE = 1e7
EM_TOL = 1e-6
EM_MAX_ITER = 500
EM_MIN_ITER = 2
EM_MAX_HALVINGS = 30
I1_FLOOR_FRAC = 1e-4
LOGLIK_SLACK = 1e-8
VAR_ORDER = 2
DETREND_THRESHOLD = 1.96
DETREND_MIN_LENGTH = 8
# Bartlett fixed-b critical value: 1.96 + c1·b + c2·b² + c3·b³
FIXED_B_BARTLETT = (2.9694, 0.4160, -0.5324)
ADF_LEVEL = 0.05
TOL_SHARE = 1.0
EIGENGAP_TOL = 1e-12
RICCATI_TOL = 1e-10
RICCATI_MAX_ITER = 10_000
BURN_IN_TOL = 1e-6
PINV_COND_LIMIT = 1e10
ORACLE_MAX_DIM = 2000
SIGNIFICANT_DIGITS = 15

# Model selection
SELECTION_SUBSAMPLES = 5
PENALTY_C_MIN = 0.01
PENALTY_C_MAX = 3.0
PENALTY_C_STEPS = 300
Q_SEARCH_MIN = 10
TREND_KMAX = 5
SPECTRAL_TOP_K = 20


class Transform(str, Enum):
    """Per-series transform codes (0 = none, 1 = log, 2 = Δlog)."""

    NONE = "none"
    LOG = "log"
    DLOG = "dlog"

    @classmethod
    def from_string(cls, value: "str | int") -> "Transform":
        """
        Parse a transform given either as a name or as the numeric code.

        :raises ValueError: If the value is not a known transform
        """
        codes = {"0": cls.NONE, "1": cls.LOG, "2": cls.DLOG}
        key = str(value).strip().lower()
        if key in codes:
            return codes[key]
        try:
            return cls(key)
        except ValueError:
            valid = ", ".join(t.value for t in cls)
            raise ValueError(f"Invalid transform: {value!r}. Must be one of: {valid}") from None


class DetrendMode(str, Enum):
    AUTO = "auto"
    FORCE_MEAN = "force_mean"
    FORCE_TREND = "force_trend"


class DeterministicKind(str, Enum):
    MEAN = "mean"
    TREND = "trend"


class RhoMode(str, Enum):
    AUTO = "auto"
    FORCE_0 = "force_0"
    FORCE_1 = "force_1"


class Frequency(str, Enum):
    QUARTERLY = "quarterly"
    MONTHLY = "monthly"
    DAILY = "daily"


class ExitCode(IntEnum):
    """Process exit codes, one per pipeline stage."""

    OK = 0
    USAGE = 2
    INPUT = 10
    PREPROCESS = 11
    SELECT = 12
    FIT = 13
    DECOMPOSE = 14
    REPORT = 15
    SIMULATE = 16
