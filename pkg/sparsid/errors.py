"""Error types shared by every subpackage.

Each error carries a short machine code and the process exit code the CLI
maps it to: 2 bad arguments/config, 3 data error, 4 numeric failure.
"""

from typing import Optional


class SparsidError(Exception):
    code = "SPARSID_ERROR"
    exit_code = 1

    def detail(self) -> dict:
        return {"success": False, "error": {"code": self.code, "message": str(self)}}


class ConfigError(SparsidError, ValueError):
    code = "CONFIG_ERROR"
    exit_code = 2


class DataError(SparsidError, ValueError):
    code = "DATA_ERROR"
    exit_code = 3


class NumericalError(SparsidError, ArithmeticError):
    code = "NUMERIC_ERROR"
    exit_code = 4

    def __init__(self, message: str, step: Optional[int] = None):
        super().__init__(message)
        self.step = step


class CurvatureError(NumericalError):
    code = "CURVATURE_ERROR"


class DisconnectedLayerError(NumericalError):
    code = "LAYER_DISCONNECTED"

    def __init__(self, layer: int):
        super().__init__(f"layer {layer} disconnected: pruning would remove every active weight")
        self.layer = layer
