"""
Configuration d'exécution (variables d'environnement) et parallélisme.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

load_dotenv()


def max_threads() -> int:
    try:
        return max(1, int(os.getenv("CATHOM_THREADS", "1")))
    except ValueError:
        logger.warning("CATHOM_THREADS invalide, exécution séquentielle")
        return 1


def log_level() -> str:
    return os.getenv("CATHOM_LOG_LEVEL", "WARNING").upper()


def configure_logging(verbose: bool = False):
    level = logging.DEBUG if verbose else getattr(logging, log_level(), logging.WARNING)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """map ordonné, réparti sur CATHOM_THREADS threads ; le résultat ne dépend pas du nombre de threads."""
    items = list(items)
    threads = min(max_threads(), len(items))
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
