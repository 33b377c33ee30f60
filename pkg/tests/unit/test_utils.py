"""Unit tests for utils modules."""

import logging
import threading
import time

import pytest

from src.utils.concurrency import bounded_map
from src.utils.error_handler import (
    AqragError,
    BackendError,
    ConfigurationError,
    ErrorHandler,
    IndexLoadError,
    ParseError,
    PipelineError,
    TransformError,
    TransientBackendError,
    ValidationError,
    configure_logging,
    retry_on_error,
    wrap_errors,
)
from src.utils.rate_limiter import RateLimiter, build_rate_limiter


@pytest.mark.unit
class TestErrors:
    """Tests for the exception hierarchy."""

    def test_base_error_to_dict(self):
        """Test error serialization."""
        error = AqragError("boom", code="X", details={"a": 1})
        data = error.to_dict()
        assert data["code"] == "X"
        assert data["message"] == "boom"
        assert data["details"] == {"a": 1}
        assert data["type"] == "AqragError"

    def test_backend_error_status_and_body(self):
        """Test status codes and truncated bodies are kept in details."""
        error = BackendError("bad", status_code=503, body="x" * 900)
        assert error.status_code == 503
        assert len(error.details["body"]) == 500
        assert isinstance(TransientBackendError("t"), BackendError)

    def test_parse_error_offset(self):
        """Test parse errors expose their byte offset."""
        assert ParseError("bad", offset=7).offset == 7

    def test_transform_error_raw_output(self):
        """Test the offending output is preserved."""
        assert TransformError("bad", raw_output="nope").details["raw_output"] == "nope"

    def test_pipeline_error_stage(self):
        """Test the failing stage is part of the message and details."""
        error = PipelineError("down", stage="rerank", subquestion_index=2)
        assert error.stage == "rerank"
        assert error.details["subquestion_index"] == 2
        assert str(error) == "[rerank] down"

    def test_index_load_error_names_file(self):
        """Test load errors name the offending file."""
        error = IndexLoadError("checksum mismatch", file="vectors.f32")
        assert error.details["file"] == "vectors.f32"
        assert error.message.startswith("vectors.f32")


@pytest.mark.unit
class TestErrorHandler:
    """Tests for ErrorHandler class."""

    @pytest.fixture
    def handler(self):
        """Create error handler instance."""
        return ErrorHandler()

    def test_dispatch_by_subclass(self, handler):
        """Test handlers match subclasses in registration order."""
        seen = []
        handler.register_handler(ConfigurationError, lambda e: seen.append("config"))
        handler.register_handler(AqragError, lambda e: seen.append("any"))
        handler.handle(ConfigurationError("c"))
        handler.handle(ValidationError("v"))
        assert seen == ["config", "any"]

    def test_fallback_logs(self, handler, caplog):
        """Test unhandled errors are logged."""
        with caplog.at_level(logging.ERROR, logger="src"):
            handler.handle(ValidationError("broken invariant"))
        assert "VALIDATION_ERROR: broken invariant" in caplog.text

    def test_failing_handler_is_contained(self, handler, caplog):
        """Test an exception inside a handler does not escape."""

        def explode(error):
            raise RuntimeError("handler bug")

        handler.register_handler(ValueError, explode)
        with caplog.at_level(logging.ERROR, logger="src"):
            handler.handle(ValueError("x"))
        assert "handler bug" in caplog.text


@pytest.mark.unit
class TestRetryOnError:
    """Tests for retry_on_error."""

    def test_retries_then_succeeds(self):
        """Test transient failures are retried with backoff."""
        attempts = []
        sleeps = []

        @retry_on_error(max_retries=3, backoff_factor=0.5, sleep=sleeps.append)
        def flaky():
            attempts.append(1)
            if len(attempts) < 3:
                raise TransientBackendError("down")
            return "ok"

        assert flaky() == "ok"
        assert len(attempts) == 3
        assert sleeps == [0.5, 1.0]

    def test_gives_up_after_max_retries(self):
        """Test at most max_retries + 1 attempts are made."""
        attempts = []

        @retry_on_error(max_retries=2, sleep=lambda s: None)
        def always_down():
            attempts.append(1)
            raise TransientBackendError("down")

        with pytest.raises(TransientBackendError):
            always_down()
        assert len(attempts) == 3

    def test_should_retry_veto(self):
        """Test the predicate stops retries immediately."""
        attempts = []

        @retry_on_error(
            error_types=(BackendError,),
            max_retries=5,
            should_retry=lambda e: False,
            sleep=lambda s: None,
        )
        def client_error():
            attempts.append(1)
            raise BackendError("bad request", status_code=400)

        with pytest.raises(BackendError):
            client_error()
        assert len(attempts) == 1

    def test_other_errors_not_retried(self):
        """Test unlisted errors propagate at once."""
        attempts = []

        @retry_on_error(max_retries=3, sleep=lambda s: None)
        def broken():
            attempts.append(1)
            raise ValueError("no")

        with pytest.raises(ValueError):
            broken()
        assert len(attempts) == 1


@pytest.mark.unit
class TestWrapErrors:
    """Tests for wrap_errors."""

    def test_wraps_foreign_errors(self):
        """Test non-engine errors are converted."""

        @wrap_errors(ValidationError, "decode failed")
        def decode():
            raise KeyError("x")

        with pytest.raises(ValidationError) as exc_info:
            decode()
        assert exc_info.value.details["function"] == "decode"
        assert isinstance(exc_info.value.original_error, KeyError)

    def test_engine_errors_pass_through(self):
        """Test engine errors are not re-wrapped."""

        @wrap_errors(ValidationError)
        def fail():
            raise ConfigurationError("cfg")

        with pytest.raises(ConfigurationError):
            fail()


@pytest.mark.unit
class TestConfigureLogging:
    """Tests for configure_logging."""

    def test_idempotent(self):
        """Test repeated calls do not stack handlers."""
        logger = configure_logging("DEBUG")
        count = len(logger.handlers)
        configure_logging("WARNING")
        assert len(logger.handlers) == count
        assert logger.level == logging.WARNING


@pytest.mark.unit
class TestRateLimiter:
    """Tests for RateLimiter class."""

    @pytest.fixture
    def clock(self):
        """Manually advanced clock."""
        state = {"now": 0.0}

        def now():
            return state["now"]

        now.state = state
        return now

    def test_burst_then_refill(self, clock):
        """Test tokens drain and refill at the configured rate."""
        limiter = RateLimiter(requests_per_minute=60, burst_size=2, clock=clock)
        assert limiter.acquire() is True
        assert limiter.acquire() is True
        assert limiter.acquire() is False
        clock.state["now"] = 1.0
        assert limiter.acquire() is True

    def test_refill_capped_at_burst(self, clock):
        """Test the bucket never exceeds its burst size."""
        limiter = RateLimiter(requests_per_minute=600, burst_size=3, clock=clock)
        clock.state["now"] = 100.0
        assert [limiter.acquire() for _ in range(4)] == [True, True, True, False]

    def test_wait_for_token_sleeps(self, clock):
        """Test waiting advances until a token is available."""

        def sleep(seconds):
            clock.state["now"] += seconds

        limiter = RateLimiter(requests_per_minute=60, burst_size=1, clock=clock, sleep=sleep)
        limiter.wait_for_token()
        limiter.wait_for_token()
        assert clock.state["now"] >= 0.95

    def test_wait_exceeds_max(self, clock):
        """Test waiting past max_wait fails."""

        def sleep(seconds):
            clock.state["now"] += seconds

        limiter = RateLimiter(
            requests_per_minute=1, burst_size=1, max_wait=0.2, clock=clock, sleep=sleep
        )
        limiter.wait_for_token()
        with pytest.raises(BackendError):
            limiter.wait_for_token()

    def test_build_rate_limiter(self):
        """Test zero disables throttling."""
        assert build_rate_limiter(0) is None
        assert build_rate_limiter(30).requests_per_minute == 30

    def test_invalid_rate(self):
        """Test non-positive rates are rejected."""
        with pytest.raises(ValueError):
            RateLimiter(requests_per_minute=0)


@pytest.mark.unit
class TestBoundedMap:
    """Tests for bounded_map."""

    def test_preserves_order(self):
        """Test results come back in input order."""

        def slow_square(x):
            time.sleep(0.001 * (10 - x))
            return x * x

        assert bounded_map(slow_square, range(10), parallelism=4) == [x * x for x in range(10)]

    def test_bound_respected(self):
        """Test no more than parallelism calls run at once."""
        lock = threading.Lock()
        state = {"active": 0, "peak": 0}

        def work(x):
            with lock:
                state["active"] += 1
                state["peak"] = max(state["peak"], state["active"])
            time.sleep(0.005)
            with lock:
                state["active"] -= 1
            return x

        bounded_map(work, range(20), parallelism=3)
        assert 1 <= state["peak"] <= 3

    def test_first_failure_in_input_order(self):
        """Test the earliest failing item's error is raised."""

        def fail_odd(x):
            if x % 2:
                raise ValueError(f"item {x}")
            return x

        with pytest.raises(ValueError, match="item 1"):
            bounded_map(fail_odd, range(6), parallelism=3)

    def test_serial_path(self):
        """Test parallelism 1 runs inline."""
        assert bounded_map(str, [1, 2], parallelism=1) == ["1", "2"]
