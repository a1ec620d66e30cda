# fedquant/utils/logging.py
"""
Logging centralizado para fedquant
Console colorido para acompanhar rodadas e arquivo opcional com origem da linha
"""

import logging
import sys
from pathlib import Path
from typing import Optional, Union


class ColoredFormatter(logging.Formatter):
    """Formatter com cores para terminal"""

    COLORS = {
        'DEBUG': '\033[36m',      # Cyan
        'INFO': '\033[92m',       # Green
        'WARNING': '\033[93m',    # Yellow
        'ERROR': '\033[91m',      # Red
        'CRITICAL': '\033[41m',   # Red background
    }
    RESET = '\033[0m'

    def format(self, record):
        # Copia para não contaminar o record visto pelo file handler
        record = logging.makeLogRecord(record.__dict__)
        levelname = record.levelname
        if levelname in self.COLORS:
            record.levelname = f"{self.COLORS[levelname]}[{levelname}]{self.RESET}"
        return super().format(record)


def _coerce_level(level: Union[int, str]) -> int:
    if isinstance(level, str):
        resolved = logging.getLevelName(level.upper())
        if not isinstance(resolved, int):
            raise ValueError(f"Unknown log level: {level}")
        return resolved
    return level


def setup_logging(
    name: str = 'fedquant',
    level: Union[int, str] = logging.INFO,
    log_file: Optional[str] = None,
) -> logging.Logger:
    """
    Configurar logger centralizado

    Args:
        name: Nome do logger
        level: Nível de logging (int ou 'DEBUG', 'INFO', ...)
        log_file: Arquivo para salvar logs (opcional)

    Returns:
        logger: Logger configurado
    """
    level = _coerce_level(level)

    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Remover handlers anteriores (evitar duplicação)
    logger.handlers.clear()

    # ===== Console Handler (Colorido) =====
    # stderr: stdout fica livre para relatórios da CLI
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)

    console_format = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    console_handler.setFormatter(ColoredFormatter(console_format, datefmt='%H:%M:%S'))
    logger.addHandler(console_handler)

    # ===== File Handler (Completo) =====
    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_path)
        file_handler.setLevel(logging.DEBUG)

        file_format = (
            '%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s'
        )
        file_handler.setFormatter(logging.Formatter(file_format))
        logger.addHandler(file_handler)
        logger.setLevel(min(level, logging.DEBUG))

    return logger


# Logger global padrão
logger = setup_logging(level=logging.INFO)


def get_logger(name: str) -> logging.Logger:
    """Obter logger para um módulo específico"""
    return logging.getLogger(f'fedquant.{name}')
