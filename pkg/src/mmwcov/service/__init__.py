"""HTTP layer: FastAPI app plus its pydantic request/response models."""

from .app import app, create_app

__all__ = ["app", "create_app"]
