class LayoutError(Exception):
    """Error base del motor de layout"""


class GraphFormatError(LayoutError, ValueError):
    """Entrada de grafo mal formada o inválida"""


class FetchError(LayoutError):
    """Fallo al descargar o leer un archivo de la colección SuiteSparse"""

    def __init__(self, message: str, retryable: bool = False):
        super().__init__(message)
        self.retryable = retryable


class UnknownMatrixError(FetchError):
    """La matriz solicitada no existe en la colección"""


class CorruptArchiveError(FetchError):
    """Archivo descargado corrupto o incompleto"""


class OutputError(LayoutError, OSError):
    """No se pudieron escribir los archivos de salida"""


class NumericalError(LayoutError, ArithmeticError):
    """Posiciones o energía no finitas durante la optimización"""

    def __init__(self, message: str, iteration: int | None = None):
        super().__init__(message)
        self.iteration = iteration
