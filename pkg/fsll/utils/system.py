import os

import psutil


def rss_mb() -> float:
    """Resident set size of this process in MiB."""
    return psutil.Process(os.getpid()).memory_info().rss / 2 ** 20
