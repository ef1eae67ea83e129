"""Service layer: FastAPI app and request/response schemas."""
