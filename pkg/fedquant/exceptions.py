# fedquant/exceptions.py

"""
Exceções do fedquant

Cada tipo também herda do builtin mais próximo, então quem chama pode
capturar ValueError genérico ou o tipo específico.

Usadas por:
- ndcore / quant / optim / nn / data  (DimensionError, ParameterError, DataError, StateError)
- models.config / cli                 (ConfigurationError, UsageError)
- data.flatfile / quant.serialization (FlatFileParseError, SerializationError)
"""

from typing import Optional


# ==== Base ====

class FedQuantError(Exception):
    """Erro base de todo o pacote"""
    pass


# ==== Erros numéricos ====

class DimensionError(FedQuantError, ValueError):
    """Formas incompatíveis entre tensores"""
    pass


class ParameterError(FedQuantError, ValueError):
    """Argumento escalar inválido (alpha <= 0, B == 0, std < 0, ...)"""
    pass


class DataError(FedQuantError, ValueError):
    """Dados inválidos: não finitos, negativos ou rótulos fora do intervalo"""
    pass


class StateError(FedQuantError):
    """Estado do otimizador inconsistente (ex.: overflow do contador de passos)"""
    pass


# ==== Erros de uso / configuração ====

class UsageError(FedQuantError):
    """Uso incorreto da API: modo errado, estudo desconhecido, sweep vazio"""
    pass


class ConfigurationError(UsageError):
    """Campo inválido em FederatedConfig ou arquivo de configuração"""
    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"Invalid config field '{field}': {message}")


# ==== Erros de formato ====

class FlatFileParseError(DataError):
    """Arquivo de dataset malformado"""
    def __init__(self, path: str, line: int, message: str, offset: Optional[int] = None):
        self.path = path
        self.line = line
        self.offset = offset
        self.message = message
        where = f"{path}:{line}" if offset is None else f"{path}:{line}:{offset}"
        super().__init__(f"{where}: {message}")


class SerializationError(DataError):
    """Bytes de QuantizedTensor ou checkpoint inválidos"""
    pass
