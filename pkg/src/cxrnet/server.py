"""HTTP inference service.

Routes:
    POST /api/v1/predict   multipart field "image", or raw image/png / image/jpeg body
    GET  /api/v1/health    liveness + model-loaded flag
    GET  /api/v1/model     architecture summary

Every 4xx/5xx body carries a machine-readable {"error": <code>} field. The
loaded model is immutable while serving; uploaded images go through exactly
the dataset preprocessing path (`preprocess_image_bytes`).
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import tensor
from .dataset import preprocess_image_bytes
from .exceptions import DecodeError, UnsupportedImageFormatError
from .model import Model

DEFAULT_MAX_BODY_BYTES = 10 * 1024 * 1024
_RAW_CONTENT_TYPES = ("image/png", "image/jpeg")


def _error(status: int, code: str, message: str | None = None) -> JSONResponse:
    body = {"error": code}
    if message:
        body["message"] = message
    return JSONResponse(status_code=status, content=body)


def create_app(
    model: Model | None,
    *,
    model_version: str = "unversioned",
    max_body_bytes: int = DEFAULT_MAX_BODY_BYTES,
    cors_origins: tuple[str, ...] = ("*",),
    static_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="cxrnet inference service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(Exception)
    async def _internal_error(request: Request, exc: Exception) -> JSONResponse:
        # Opaque on purpose: no internals leak into responses.
        return _error(500, "internal_error")

    @app.get("/api/v1/health")
    async def health():
        return {"status": "ok", "model_loaded": model is not None}

    @app.get("/api/v1/model")
    async def model_info():
        if model is None:
            return _error(503, "model_not_loaded")
        return {
            "input_shape": list(model.input_shape),
            "class_labels": list(model.class_labels),
            "parameter_count": model.parameter_count,
            "layers": model.describe(),
            "model_version": model_version,
        }

    @app.post("/api/v1/predict")
    async def predict(request: Request):
        if model is None:
            return _error(503, "model_not_loaded")
        declared = request.headers.get("content-length")
        if declared and declared.isdigit() and int(declared) > max_body_bytes:
            return _error(413, "payload_too_large", f"body exceeds {max_body_bytes} bytes")

        content_type = request.headers.get("content-type", "")
        if content_type.startswith("multipart/form-data"):
            form = await request.form()
            upload = form.get("image")
            if upload is None or isinstance(upload, str):
                return _error(400, "missing_image_field", 'multipart field "image" is required')
            data = await upload.read()
        elif content_type.split(";")[0].strip().lower() in _RAW_CONTENT_TYPES:
            data = await request.body()
        else:
            return _error(
                415,
                "unsupported_media_type",
                "send multipart/form-data or a raw image/png or image/jpeg body",
            )
        if len(data) > max_body_bytes:
            return _error(413, "payload_too_large", f"body exceeds {max_body_bytes} bytes")

        try:
            in_h, in_w = model.input_shape[0], model.input_shape[1]
            pixels = preprocess_image_bytes(data, in_h, in_w)
        except UnsupportedImageFormatError as exc:
            return _error(415, "unsupported_media_type", str(exc))
        except DecodeError:
            return _error(400, "decode_failed")

        probs = model.forward(pixels[None])[0]
        index = tensor.argmax(probs)
        return {
            "predicted_index": index,
            "predicted_label": model.class_labels[index],
            "probabilities": {
                label: float(p) for label, p in zip(model.class_labels, probs)
            },
            "model_version": model_version,
        }

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app
