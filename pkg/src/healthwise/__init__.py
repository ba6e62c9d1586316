"""healthwise: barcode-driven nutrition lookup, daily energy budgeting with
green/red verdicts, exercise suggestions for excess calories, and the HTTP
server + CLI that tie them together."""

__version__ = "0.1.0"

from .barcode import Gtin, Symbology, compute_check_digit, validate_code
from .catalog import Catalog, ProductRecord, energy_for_quantity
from .energy import (
    Activity,
    ActivityFactors,
    Gender,
    MealSplit,
    RequirementTable,
    UserProfile,
    default_requirement_table,
    meal_budgets,
    required_energy,
    standard_energy,
)
from .errors import HealthwiseError
from .exercise import ExercisePlanItem, ExerciseSpec, suggest
from .ledger import (
    ConsumptionEntry,
    ConsumptionLog,
    EnergyVerdict,
    Meal,
    Verdict,
    add_consumption,
    check_energy,
)
from .profiles import ProfileStore

__all__ = [
    "Activity",
    "ActivityFactors",
    "Catalog",
    "ConsumptionEntry",
    "ConsumptionLog",
    "EnergyVerdict",
    "ExercisePlanItem",
    "ExerciseSpec",
    "Gender",
    "Gtin",
    "HealthwiseError",
    "Meal",
    "MealSplit",
    "ProductRecord",
    "ProfileStore",
    "RequirementTable",
    "Symbology",
    "UserProfile",
    "Verdict",
    "__version__",
    "add_consumption",
    "check_energy",
    "compute_check_digit",
    "default_requirement_table",
    "energy_for_quantity",
    "meal_budgets",
    "required_energy",
    "standard_energy",
    "suggest",
    "validate_code",
]
