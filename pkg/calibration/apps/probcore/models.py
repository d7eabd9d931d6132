from dataclasses import dataclass


@dataclass(frozen=True)
class Prediction:
    """Predicted class and its (possibly calibrated) confidence."""
    label: int
    confidence: float

    def __iter__(self):
        return iter((self.label, self.confidence))
