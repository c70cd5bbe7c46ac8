"""
日志初始化
"""
import sys
from typing import Optional

from loguru import logger

LOG_FORMAT = "<green>{time:HH:mm:ss}</green> | <level>{level: <7}</level> | <cyan>{name}</cyan> - {message}"


def configure_logging(level: str = "INFO", log_file: Optional[str] = None) -> None:
    """
    替换 loguru 默认 sink：stderr 输出，可选追加文件

    Args:
        level: 日志级别
        log_file: 日志文件路径
    """
    logger.remove()
    logger.add(sys.stderr, level=level.upper(), format=LOG_FORMAT)
    if log_file:
        logger.add(log_file, level="DEBUG", encoding="utf-8", enqueue=False)
