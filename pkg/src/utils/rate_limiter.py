"""
Request throttling for remote model services.

This module provides a token bucket that the HTTP gateway consults before
each request so long evaluation runs stay under a provider's quota.
"""

from typing import Callable, Optional
import threading
import time

from .error_handler import BackendError


class RateLimiter:
    """
    Token bucket rate limiter.

    Tokens refill continuously at ``requests_per_minute / 60`` per second up
    to ``burst_size``.
    """

    def __init__(
        self,
        requests_per_minute: int = 60,
        burst_size: int = 10,
        max_wait: float = 60.0,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        """
        Initialize rate limiter.

        Args:
            requests_per_minute: Sustained request rate
            burst_size: Maximum burst size
            max_wait: Longest time wait_for_token may block
            clock: Monotonic clock (injectable for tests)
            sleep: Sleep function (injectable for tests)
        """
        if requests_per_minute <= 0:
            raise ValueError("requests_per_minute must be positive")
        self.requests_per_minute = requests_per_minute
        self.burst_size = burst_size
        self.max_wait = max_wait
        self._clock = clock
        self._sleep = sleep

        self._tokens: float = float(burst_size)
        self._last_update: float = clock()
        self._lock = threading.Lock()

    def acquire(self, tokens: int = 1) -> bool:
        """
        Acquire tokens from the bucket.

        Args:
            tokens: Number of tokens to acquire

        Returns:
            True if tokens acquired, False otherwise
        """
        with self._lock:
            self._refill()
            if self._tokens >= tokens:
                self._tokens -= tokens
                return True
            return False

    def wait_for_token(self, tokens: int = 1) -> None:
        """
        Block until tokens are available.

        Args:
            tokens: Number of tokens to wait for

        Raises:
            BackendError: If the wait exceeds max_wait
        """
        start_time = self._clock()
        while not self.acquire(tokens):
            elapsed = self._clock() - start_time
            if elapsed > self.max_wait:
                raise BackendError(
                    f"Rate limit wait exceeded {self.max_wait:.0f}s",
                    details={"waited": round(elapsed, 2)},
                )
            self._sleep(0.05)

    def _refill(self) -> None:
        now = self._clock()
        elapsed = now - self._last_update
        if elapsed <= 0:
            return
        self._tokens = min(
            self._tokens + self.requests_per_minute * elapsed / 60.0, float(self.burst_size)
        )
        self._last_update = now


def build_rate_limiter(requests_per_minute: int) -> Optional[RateLimiter]:
    """Create a limiter, or None when throttling is disabled (0)."""
    if requests_per_minute <= 0:
        return None
    return RateLimiter(requests_per_minute=requests_per_minute)
