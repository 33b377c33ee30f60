"""
Configuration management module for the AQ-guided RAG engine.

This module provides centralized configuration management using Pydantic for
settings validation and environment variable loading, plus the validated
configuration models shared by the chunker, the pipeline and the evaluation
harness.
"""

from typing import Optional, Dict, Any
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import BaseModel, ConfigDict, Field, SecretStr, model_validator
from enum import Enum
import os
from pathlib import Path


class LogLevel(str, Enum):
    """Log levels for the application."""

    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


class BackendKind(str, Enum):
    """Model backend families."""

    MOCK = "mock"
    HTTP = "http"


class RerankMode(str, Enum):
    """How the HTTP backend obtains relevance scores."""

    ENDPOINT = "endpoint"
    CHAT = "chat"


class InferenceMode(str, Enum):
    """Answer generation strategies."""

    UNIFIED = "unified"
    SEQUENTIAL = "sequential"


class ContextOrder(str, Enum):
    """Order of chunks inside the generation context."""

    RERANK = "rerank"
    DOCUMENT = "document"


class EngineSettings(BaseSettings):
    """Process-wide engine settings."""

    model_config = SettingsConfigDict(
        env_prefix="AQRAG_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    log_level: LogLevel = Field(default=LogLevel.INFO, description="Logging level")
    backend: BackendKind = Field(
        default=BackendKind.MOCK, description="Default backend family"
    )
    parallelism: int = Field(
        default=4, ge=1, description="Maximum concurrent backend requests"
    )
    cache_dir: Optional[Path] = Field(
        default=None, description="On-disk index cache directory"
    )


class BackendConfig(BaseSettings):
    """Model gateway configuration (OpenAI-compatible services)."""

    model_config = SettingsConfigDict(
        env_prefix="AQRAG_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    base_url: str = Field(
        default="http://localhost:8000/v1", description="Service base URL"
    )
    api_key: Optional[SecretStr] = Field(default=None, description="API key")
    chat_model: str = Field(default="gpt-4o", description="Answer generator model")
    decomposer_model: str = Field(
        default="", description="Decomposition model (defaults to chat_model)"
    )
    aq_model: str = Field(
        default="", description="Question generation model (defaults to chat_model)"
    )
    embed_model: str = Field(
        default="intfloat/multilingual-e5-large", description="Embedding model"
    )
    rerank_model: str = Field(
        default="cross-encoder/ms-marco-MiniLM-L-12-v2", description="Reranker model"
    )
    rerank_mode: RerankMode = Field(
        default=RerankMode.ENDPOINT, description="Rerank via /rerank or chat scoring"
    )
    timeout: float = Field(default=60.0, gt=0, description="Request timeout (seconds)")
    max_retries: int = Field(default=2, ge=0, description="Max retry attempts")
    backoff_factor: float = Field(
        default=0.5, ge=0, description="Exponential backoff base (seconds)"
    )
    requests_per_minute: int = Field(
        default=0, ge=0, description="Client-side throttle (0 disables)"
    )
    temperature: float = Field(default=0.0, ge=0.0, description="Sampling temperature")
    max_output_tokens: int = Field(default=1024, ge=1, description="Max output tokens")
    embed_prefix_query: str = Field(default="query: ", description="Query-side prefix")
    embed_prefix_passage: str = Field(
        default="passage: ", description="Passage-side prefix"
    )
    embed_batch_size: int = Field(default=64, ge=1, description="Texts per embed call")
    mock_dims: int = Field(default=64, ge=1, description="Mock embedder dimension")

    def model_for(self, role: str) -> str:
        """Resolve the model name for a chat role (generator/decomposer/aq)."""
        if role == "decomposer" and self.decomposer_model:
            return self.decomposer_model
        if role == "aq" and self.aq_model:
            return self.aq_model
        return self.chat_model

    def secret_key(self) -> Optional[str]:
        """Return the raw API key, if configured."""
        return self.api_key.get_secret_value() if self.api_key else None


class ChunkingConfig(BaseModel):
    """Sliding character window parameters."""

    model_config = ConfigDict(frozen=True)

    window: int = Field(default=800, gt=0, description="Window size in characters")
    stride: int = Field(default=600, gt=0, description="Stride in characters")

    @model_validator(mode="after")
    def check_stride(self) -> "ChunkingConfig":
        """Require 0 < stride <= window."""
        if self.stride > self.window:
            raise ValueError(
                f"stride ({self.stride}) must not exceed window ({self.window})"
            )
        return self

    @property
    def overlap(self) -> int:
        """Characters shared by consecutive full windows."""
        return self.window - self.stride


class PipelineConfig(BaseModel):
    """Online inference parameters."""

    model_config = ConfigDict(frozen=True)

    k1: int = Field(default=100, ge=1, description="Per-subquestion retrieval depth")
    k2: int = Field(default=7, ge=1, description="Chunks kept after reranking")
    inference_mode: InferenceMode = Field(default=InferenceMode.UNIFIED)
    decomposition: bool = Field(default=True, description="Decompose the question")
    context_order: ContextOrder = Field(default=ContextOrder.RERANK)
    max_subquestions: int = Field(default=8, ge=1, description="Decomposition cap")


class Config:
    """Main configuration class that aggregates all settings."""

    _instance: Optional["Config"] = None
    _engine: Optional[EngineSettings] = None
    _backend: Optional[BackendConfig] = None

    def __new__(cls) -> "Config":
        """Singleton pattern for configuration."""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    @property
    def engine(self) -> EngineSettings:
        """Get engine settings."""
        if self._engine is None:
            self._engine = EngineSettings()
        assert self._engine is not None
        return self._engine

    @property
    def backend(self) -> BackendConfig:
        """Get backend configuration."""
        if self._backend is None:
            self._backend = BackendConfig()
        assert self._backend is not None
        return self._backend

    def reload(self) -> None:
        """Reload all configurations from environment variables."""
        self._engine = EngineSettings()
        self._backend = BackendConfig()

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary (excluding sensitive values)."""
        return {
            "engine": self.engine.model_dump(mode="json"),
            "backend": self.backend.model_dump(mode="json", exclude={"api_key"}),
        }


def live_tests_enabled() -> bool:
    """Whether env-gated live smoke tests may run."""
    return os.getenv("AQRAG_LIVE_TESTS", "0") == "1"


# Global configuration instance
config = Config()


def get_config() -> Config:
    """Get the global configuration instance."""
    return config
