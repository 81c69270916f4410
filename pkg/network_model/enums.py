from enum import Enum


# -------- Scenario vocabulary --------

class AllocationMode(str, Enum):
    DEDICATED = "dedicated"
    SHARED = "shared"


class LinkClass(str, Enum):
    D2D = "d2d"
    CELLULAR = "cellular"


# -------- Evaluation knobs --------

class Utility(str, Enum):
    TOTAL_RATE = "total_rate"
    LOG_RATE = "log_rate"


class SimulationFidelity(str, Enum):
    THINNED = "thinned"
    SCHEDULED = "scheduled"


# -------- Optimizer output --------

class SearchMethod(str, Enum):
    CLOSED_FORM = "closed_form"
    REDUCED_GRID = "reduced_grid_search"
    FULL_GRID = "full_grid_search"


# -------- Experiment harness --------

class Task(str, Enum):
    COVERAGE = "coverage"
    RATES = "rates"
    VALIDATE = "validate"
    OPTIMIZE = "optimize"
    SWEEP = "sweep"


class OutputFormat(str, Enum):
    CSV = "csv"
    RECORD = "record"
    JSON = "json"
