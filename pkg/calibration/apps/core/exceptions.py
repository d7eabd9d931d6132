import json

from django.core.management.base import CommandError
from rest_framework import status
from rest_framework.exceptions import APIException

EXIT_VALIDATION = 1
EXIT_BOUND_FAILED = 2
EXIT_IO = 3


class CalibrationException(APIException):
    """Base class of every error the toolkit raises on purpose."""
    status_code = status.HTTP_400_BAD_REQUEST
    default_detail = 'The calibration request could not be completed.'
    default_code = 'calibration_error'
    exit_code = EXIT_VALIDATION


class MissingFile(CalibrationException):
    status_code = status.HTTP_404_NOT_FOUND
    default_detail = 'A referenced file does not exist.'
    default_code = 'missing_file'
    exit_code = EXIT_IO


class IoFailure(CalibrationException):
    status_code = status.HTTP_500_INTERNAL_SERVER_ERROR
    default_detail = 'Reading or writing a file failed.'
    default_code = 'io_failure'
    exit_code = EXIT_IO


class SchemaViolation(CalibrationException):
    default_detail = 'Input does not follow the documented format.'
    default_code = 'schema_violation'


class NonFiniteValue(CalibrationException):
    default_detail = 'Input contains a non-finite value.'
    default_code = 'non_finite_value'


class LabelOutOfRange(CalibrationException):
    default_detail = 'A label is outside [0, num_classes).'
    default_code = 'label_out_of_range'


class DomainTooSmall(CalibrationException):
    default_detail = 'A domain has too few samples to split.'
    default_code = 'domain_too_small'


class NonPositiveTemperature(CalibrationException):
    default_detail = 'Temperature must be positive.'
    default_code = 'non_positive_temperature'


class EmptyDataset(CalibrationException):
    default_detail = 'The dataset has no samples.'
    default_code = 'empty_dataset'


class InvalidBounds(CalibrationException):
    default_detail = 'Temperature bounds must satisfy 0 < t_min < t_max.'
    default_code = 'invalid_bounds'


class EmptyTrainingSet(CalibrationException):
    default_detail = 'The regression training set is empty.'
    default_code = 'empty_training_set'


class SingularSystem(CalibrationException):
    default_detail = 'The regression system could not be solved.'
    default_code = 'singular_system'


class DimensionMismatch(CalibrationException):
    default_detail = 'Input dimension does not match the model.'
    default_code = 'dimension_mismatch'


class InvalidHyperparameters(CalibrationException):
    default_detail = 'Regressor hyperparameters are missing or out of range.'
    default_code = 'invalid_hyperparameters'


class TooFewDomains(CalibrationException):
    default_detail = 'At least two domains are required.'
    default_code = 'too_few_domains'


class TooManyDomains(CalibrationException):
    default_detail = 'Too many domains for exhaustive mixture search.'
    default_code = 'too_many_domains'


class EmptyInput(CalibrationException):
    default_detail = 'Input is empty.'
    default_code = 'empty_input'


class InvalidBinCount(CalibrationException):
    default_detail = 'Bin count must be a positive integer.'
    default_code = 'invalid_bin_count'


class InvalidConfig(CalibrationException):
    default_detail = 'Configuration is invalid.'
    default_code = 'invalid_config'


class MissingOracle(CalibrationException):
    default_detail = 'Oracle confidences are required but absent.'
    default_code = 'missing_oracle'


class ModelMismatch(CalibrationException):
    default_detail = 'Model and dataset disagree on num_classes or embedding_dim.'
    default_code = 'model_mismatch'


class CalibrationFailed(CalibrationException):
    default_detail = 'The calibrator failed on a sample.'
    default_code = 'calibration_failed'


class BoundFailed(CalibrationException):
    default_detail = 'The OOD risk exceeds the right-hand side of the bound.'
    default_code = 'bound_failed'
    exit_code = EXIT_BOUND_FAILED


def core_exception_handler(exc):
    """Turn an exception into the CommandError a management command exits with.

    Returns None for exceptions the toolkit does not own, so they keep
    propagating with their traceback.
    """
    handlers = {
        'ValidationError': _handle_schema_error,
        'ParseError': _handle_schema_error,
    }
    exception_class = exc.__class__.__name__

    if exception_class in handlers:
        return handlers[exception_class](exc)

    if isinstance(exc, CalibrationException):
        return _handle_calibration_error(exc)

    return None


def render_errors(detail):
    return json.dumps({'errors': _plain(detail)}, sort_keys=True)


def _handle_schema_error(exc):
    return CommandError(render_errors(exc.detail), returncode=EXIT_VALIDATION)


def _handle_calibration_error(exc):
    return CommandError(render_errors(exc.detail), returncode=exc.exit_code)


def _plain(detail):
    # ErrorDetail is a str subclass; unwrap nested containers for json.
    if isinstance(detail, dict):
        return {str(key): _plain(value) for key, value in detail.items()}
    if isinstance(detail, (list, tuple)):
        return [_plain(item) for item in detail]
    return str(detail)
