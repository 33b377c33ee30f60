"""
HTTP backends for OpenAI-compatible model services.

Wire protocols:
- chat:       POST {base_url}/chat/completions
- embeddings: POST {base_url}/embeddings
- rerank:     POST {base_url}/rerank, or chat-based scoring (ChatRerankBackend)
"""

from typing import Any, Dict, List, Optional, Sequence
import logging
import re

import requests

from .base import ChatBackend, ChatRequest, EmbeddingBackend, RerankBackend
from ..core.config import BackendConfig
from ..utils.error_handler import BackendError, TransientBackendError, retry_on_error
from ..utils.rate_limiter import RateLimiter, build_rate_limiter

logger = logging.getLogger(__name__)


def _retryable(error: Exception) -> bool:
    if isinstance(error, TransientBackendError):
        return True
    status = getattr(error, "status_code", None)
    return status is not None and status >= 500


class HttpTransport:
    """
    Shared JSON-over-HTTP transport.

    Retries transport failures and 5xx responses up to ``max_retries`` times
    with exponential backoff; 4xx responses fail immediately.
    """

    def __init__(
        self,
        base_url: str,
        api_key: Optional[str] = None,
        timeout: float = 60.0,
        max_retries: int = 2,
        backoff_factor: float = 0.5,
        rate_limiter: Optional[RateLimiter] = None,
        session: Optional[requests.Session] = None,
        sleep: Any = None,
    ):
        """
        Initialize the transport.

        Args:
            base_url: Service base URL
            api_key: Bearer token (optional)
            timeout: Per-request timeout in seconds
            max_retries: Retries after the first attempt
            backoff_factor: Exponential backoff base in seconds
            rate_limiter: Optional client-side throttle
            session: requests session (injectable for tests)
            sleep: Sleep function override for backoff (tests)
        """
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.max_retries = max_retries
        self.rate_limiter = rate_limiter
        self._session = session or requests.Session()
        self._headers = {"Content-Type": "application/json"}
        if api_key:
            self._headers["Authorization"] = f"Bearer {api_key}"

        retry_kwargs: Dict[str, Any] = {
            "error_types": (BackendError,),
            "max_retries": max_retries,
            "backoff_factor": backoff_factor,
            "should_retry": _retryable,
            "logger": logger,
        }
        if sleep is not None:
            retry_kwargs["sleep"] = sleep
        self._post_with_retry = retry_on_error(**retry_kwargs)(self._post_once)

    @classmethod
    def from_config(
        cls, cfg: BackendConfig, session: Optional[requests.Session] = None
    ) -> "HttpTransport":
        """Create a transport from backend settings."""
        return cls(
            base_url=cfg.base_url,
            api_key=cfg.secret_key(),
            timeout=cfg.timeout,
            max_retries=cfg.max_retries,
            backoff_factor=cfg.backoff_factor,
            rate_limiter=build_rate_limiter(cfg.requests_per_minute),
            session=session,
        )

    def post(self, path: str, payload: Dict[str, Any]) -> Dict[str, Any]:
        """
        POST a JSON payload and return the decoded JSON object.

        Raises:
            TransientBackendError: Transport failure after all retries
            BackendError: Non-2xx response or malformed body
        """
        return self._post_with_retry(path, payload)

    def _post_once(self, path: str, payload: Dict[str, Any]) -> Dict[str, Any]:
        if self.rate_limiter is not None:
            self.rate_limiter.wait_for_token()

        url = f"{self.base_url}{path}"
        try:
            response = self._session.post(
                url, json=payload, headers=self._headers, timeout=self.timeout
            )
        except requests.RequestException as e:
            raise TransientBackendError(
                f"Request to {path} failed: {e}", original_error=e
            ) from e

        if not 200 <= response.status_code < 300:
            raise BackendError(
                f"{path} returned HTTP {response.status_code}",
                status_code=response.status_code,
                body=response.text,
            )

        try:
            data = response.json()
        except ValueError as e:
            raise BackendError(f"{path} returned invalid JSON", body=response.text) from e
        if not isinstance(data, dict):
            raise BackendError(f"{path} returned a non-object body", body=response.text)
        return data


class HttpChatBackend(ChatBackend):
    """Chat completions over HTTP."""

    def __init__(self, transport: HttpTransport, model_name: str):
        super().__init__(model_name)
        self.transport = transport

    def _complete(self, request: ChatRequest) -> str:
        payload = {
            "model": self.model_name,
            "messages": [
                {"role": "system", "content": request.system_prompt},
                {"role": "user", "content": request.user_prompt},
            ],
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        }
        data = self.transport.post("/chat/completions", payload)
        try:
            content = data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as e:
            raise BackendError("Unexpected chat response format", body=str(data)) from e
        if not isinstance(content, str):
            raise BackendError("Chat response content is not a string", body=str(data))
        return content


class HttpEmbeddingBackend(EmbeddingBackend):
    """Embeddings over HTTP, in configurable batch sizes."""

    def __init__(
        self,
        transport: HttpTransport,
        model_name: str,
        prefix_query: str = "query: ",
        prefix_passage: str = "passage: ",
        batch_size: int = 64,
    ):
        super().__init__(model_name, prefix_query, prefix_passage)
        self.transport = transport
        self.batch_size = batch_size

    def _embed_raw(self, texts: List[str]) -> List[Sequence[float]]:
        vectors: List[Sequence[float]] = []
        for start in range(0, len(texts), self.batch_size):
            batch = texts[start : start + self.batch_size]
            data = self.transport.post("/embeddings", {"model": self.model_name, "input": batch})
            try:
                items = sorted(data["data"], key=lambda item: item.get("index", 0))
                vectors.extend(item["embedding"] for item in items)
            except (KeyError, TypeError, AttributeError) as e:
                raise BackendError("Unexpected embedding response format", body=str(data)) from e
        return vectors


class HttpRerankBackend(RerankBackend):
    """Cross-encoder scores from a /rerank endpoint."""

    def __init__(self, transport: HttpTransport, model_name: str):
        super().__init__(model_name)
        self.transport = transport

    def _score(self, query: str, passages: List[str]) -> List[float]:
        data = self.transport.post(
            "/rerank", {"model": self.model_name, "query": query, "documents": passages}
        )
        try:
            if "scores" in data:
                return [float(s) for s in data["scores"]]
            scores = [0.0] * len(passages)
            seen = set()
            for item in data["results"]:
                idx = int(item["index"])
                value = item.get("relevance_score", item.get("score"))
                scores[idx] = float(value)
                seen.add(idx)
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise BackendError("Unexpected rerank response format", body=str(data)) from e
        if len(seen) != len(passages):
            raise BackendError("Rerank response does not score every document", body=str(data))
        return scores


RERANK_SYSTEM_PROMPT = (
    "You are a relevance judge. Rate how useful the passage is for answering the "
    "question on a scale from 0 (irrelevant) to 10 (fully answers it). "
    "Reply with the number only."
)

_NUMBER = re.compile(r"-?\d+(?:\.\d+)?")


class ChatRerankBackend(RerankBackend):
    """Relevance scoring through a chat model (explicit fallback mode)."""

    def __init__(self, chat: ChatBackend, max_output_tokens: int = 8):
        super().__init__(f"chat:{chat.model_name}")
        self.chat = chat
        self.max_output_tokens = max_output_tokens

    def _score(self, query: str, passages: List[str]) -> List[float]:
        scores: List[float] = []
        for passage in passages:
            reply = self.chat.chat(
                ChatRequest(
                    system_prompt=RERANK_SYSTEM_PROMPT,
                    user_prompt=f"Question: {query}\n\nPassage: {passage}\n\nRating:",
                    max_output_tokens=self.max_output_tokens,
                )
            )
            match = _NUMBER.search(reply)
            if match is None:
                raise BackendError("Chat reranker reply has no rating", body=reply)
            scores.append(float(match.group()))
        return scores
