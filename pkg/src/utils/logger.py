import logging
import os
from logging.handlers import RotatingFileHandler

import colorlog


def setup_logger():
    """配置彩色日志（控制台输出到 stderr，文件输出到 logs/syz.log）"""
    log_dir = os.getenv("SYZ_LOG_DIR", "logs")
    level_name = os.getenv("SYZ_LOG_LEVEL", "INFO").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.INFO

    # 控制台处理器
    console_handler = colorlog.StreamHandler()
    console_handler.setFormatter(colorlog.ColoredFormatter(
        fmt='%(asctime)s - %(log_color)s%(levelname)-8s%(reset)s - %(message)s',
        datefmt='%H:%M:%S',
        log_colors={
            'DEBUG':    'cyan',
            'INFO':     'green',
            'WARNING': 'yellow',
            'ERROR':   'red',
            'CRITICAL': 'red,bg_white',
        },
        style='%'
    ))

    logger = colorlog.getLogger("syz")
    logger.handlers.clear()
    logger.addHandler(console_handler)

    # 文件处理器（目录不可写时只保留控制台）
    try:
        os.makedirs(log_dir, exist_ok=True)
        file_handler = RotatingFileHandler(
            os.path.join(log_dir, 'syz.log'),
            maxBytes=1024*1024,  # 1MB
            backupCount=5
        )
        file_handler.setFormatter(logging.Formatter(
            '%(asctime)s - %(levelname)s - %(message)s'
        ))
        logger.addHandler(file_handler)
    except OSError as e:
        logger.warning(f"无法创建日志目录 {log_dir}: {e}")

    logger.setLevel(level)
    logger.propagate = False
    return logger

logger = setup_logger()
