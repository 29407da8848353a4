from typing import Sequence

from utils.constraints import VALIDATION_LIMITS
from utils.exceptions import PreconditionError, SignatureError


def validate_positive_ints(values: Sequence[int], field_name: str) -> bool:
    """Validates weight/degree vectors against predefined limits"""
    if field_name not in VALIDATION_LIMITS:
        raise SignatureError(
            message=f"Unknown field: {field_name}",
            details={"field": field_name}
        )
    if len(values) == 0:
        raise SignatureError(
            message=f"{field_name} list must not be empty",
            details={"field": field_name}
        )
    limits = VALIDATION_LIMITS[field_name]
    for value in values:
        if isinstance(value, bool) or not isinstance(value, int):
            raise SignatureError(
                message=f"{field_name} entries must be integers",
                details={
                    "field": field_name,
                    "type": type(value).__name__,
                    "expected_type": "int"
                }
            )
        if value < limits["min"] or value > limits["max"]:
            raise SignatureError(
                message=f"{field_name} entries must be between {limits['min']} and {limits['max']}",
                details={
                    "field": field_name,
                    "value": value,
                    "min": limits["min"],
                    "max": limits["max"]
                }
            )
    return True


def validate_signature(weights: Sequence[int], degrees: Sequence[int]) -> bool:
    """Validates a germ signature: positive entries and kappa = n - m >= 0"""
    validate_positive_ints(weights, "weight")
    validate_positive_ints(degrees, "degree")
    if len(degrees) < len(weights):
        raise SignatureError(
            message="Negative relative codimension (n < m) is not supported",
            details={"m": len(weights), "n": len(degrees)}
        )
    return True


def validate_in_range(value: int, field_name: str) -> bool:
    limits = VALIDATION_LIMITS[field_name]
    if value < limits["min"] or value > limits["max"]:
        raise PreconditionError(
            message=f"{field_name} must be between {limits['min']} and {limits['max']}",
            details={"field": field_name, "value": value, "min": limits["min"], "max": limits["max"]}
        )
    return True
