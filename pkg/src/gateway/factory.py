"""Backend construction from configuration."""

from typing import Optional
import logging

import requests

from .base import Backends, ChatBackend, RerankBackend
from .http import (
    ChatRerankBackend,
    HttpChatBackend,
    HttpEmbeddingBackend,
    HttpRerankBackend,
    HttpTransport,
)
from .mock import HashEmbeddingBackend, LexicalRerankBackend, MockChatBackend
from ..core.config import BackendConfig, BackendKind, RerankMode

logger = logging.getLogger(__name__)


def build_backends(
    kind: BackendKind,
    cfg: Optional[BackendConfig] = None,
    parallelism: int = 1,
    mock_chat: Optional[ChatBackend] = None,
    session: Optional[requests.Session] = None,
) -> Backends:
    """
    Build the backend bundle.

    Args:
        kind: mock or http
        cfg: Backend settings (environment defaults if None)
        parallelism: Concurrency bound for backend calls
        mock_chat: Chat backend used for every role in mock mode
        session: requests session shared by HTTP backends

    Returns:
        Backends bundle
    """
    cfg = cfg or BackendConfig()

    if BackendKind(kind) is BackendKind.MOCK:
        chat = mock_chat or MockChatBackend()
        logger.debug("Using mock backends")
        return Backends(
            generator=chat,
            embedder=HashEmbeddingBackend(
                dims=cfg.mock_dims,
                prefix_query=cfg.embed_prefix_query,
                prefix_passage=cfg.embed_prefix_passage,
            ),
            reranker=LexicalRerankBackend(),
            parallelism=parallelism,
            temperature=cfg.temperature,
            max_output_tokens=cfg.max_output_tokens,
        )

    transport = HttpTransport.from_config(cfg, session=session)
    generator = HttpChatBackend(transport, cfg.model_for("generator"))
    decomposer = HttpChatBackend(transport, cfg.model_for("decomposer"))
    aq_generator = HttpChatBackend(transport, cfg.model_for("aq"))

    reranker: RerankBackend
    if cfg.rerank_mode is RerankMode.CHAT:
        reranker = ChatRerankBackend(HttpChatBackend(transport, cfg.rerank_model))
    else:
        reranker = HttpRerankBackend(transport, cfg.rerank_model)

    logger.debug(f"Using HTTP backends at {transport.base_url}")
    return Backends(
        generator=generator,
        decomposer=decomposer,
        aq_generator=aq_generator,
        embedder=HttpEmbeddingBackend(
            transport,
            cfg.embed_model,
            prefix_query=cfg.embed_prefix_query,
            prefix_passage=cfg.embed_prefix_passage,
            batch_size=cfg.embed_batch_size,
        ),
        reranker=reranker,
        parallelism=parallelism,
        temperature=cfg.temperature,
        max_output_tokens=cfg.max_output_tokens,
    )
