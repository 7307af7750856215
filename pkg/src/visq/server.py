"""HTTP API over a loaded feature store, plus optional static UI hosting."""

from __future__ import annotations

import io
import threading

from fastapi import FastAPI, File, Form, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from PIL import Image

from .errors import CorruptDataError, MissingFeatureError, UnsupportedFormatError
from .estimators import coerce_image
from .metrics import MetricSpec
from .query import QuerySpec, parse_weights, rank
from .store import FeatureStore, extract_features

THUMB_MAX_SIDE = 128


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


class ThumbnailCache:
    """Lazily rendered PNG thumbnails, keyed by corpus id."""

    def __init__(self, store: FeatureStore):
        self._store = store
        self._cache: dict[str, bytes] = {}
        self._lock = threading.Lock()

    def get(self, image_id: str) -> bytes:
        with self._lock:
            cached = self._cache.get(image_id)
        if cached is not None:
            return cached
        entry = self._store.get(image_id)
        with Image.open(entry.path) as img:
            img = img.convert("RGB")
            img.thumbnail((THUMB_MAX_SIDE, THUMB_MAX_SIDE), Image.NEAREST)
            buf = io.BytesIO()
            img.save(buf, format="PNG")
        data = buf.getvalue()
        with self._lock:
            self._cache[image_id] = data
        return data


def _default_weights(store: FeatureStore, metric: MetricSpec) -> dict:
    families = store.config.enabled_families()
    if metric.kind in ("bray_curtis", "hamming"):
        families = tuple(f for f in families if f != "texture")
    return {family: 1.0 for family in families}


def create_app(store: FeatureStore, assets_dir: str | None = None) -> FastAPI:
    """Build the API application around one immutable store."""
    app = FastAPI(title="visq", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    thumbs = ThumbnailCache(store)

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.get("/api/config")
    def config():
        payload = store.config.to_dict()
        payload["entry_count"] = len(store)
        return payload

    @app.get("/api/corpus")
    def corpus(offset: int = 0, limit: int = 50):
        if offset < 0 or limit < 1:
            return _error(400, "offset must be >= 0 and limit >= 1")
        window = store.entries[offset:offset + limit]
        body = [
            {"id": e.id, "label": e.label, "thumb_url": f"/api/images/{e.id}/thumb"}
            for e in window
        ]
        return JSONResponse(content=body, headers={"X-Total-Count": str(len(store))})

    @app.get("/api/images/{image_id:path}/thumb")
    def thumb(image_id: str):
        try:
            data = thumbs.get(image_id)
        except KeyError:
            return _error(404, f"unknown image id {image_id!r}")
        except OSError as exc:
            return _error(404, f"source image unavailable: {exc}")
        return Response(content=data, media_type="image/png")

    @app.post("/api/query")
    async def query(
        file: UploadFile | None = File(default=None),
        image_id: str | None = Form(default=None),
        metric: str = Form(default="l1"),
        mk: float | None = Form(default=None),
        k: int = Form(default=10),
        weights: str | None = Form(default=None),
    ):
        if (file is None) == (image_id is None):
            return _error(400, "provide exactly one of file upload or image_id")
        try:
            metric_spec = MetricSpec(metric, mk)
        except ValueError as exc:
            return _error(400, str(exc))
        if weights is None:
            weight_map = _default_weights(store, metric_spec)
        else:
            try:
                weight_map = parse_weights(weights)
            except ValueError as exc:
                return _error(400, str(exc))
        try:
            spec = QuerySpec(metric=metric_spec, k=k, weights=weight_map)
        except ValueError as exc:
            return _error(400, str(exc))

        if image_id is not None:
            try:
                fv = store.get(image_id)
            except KeyError:
                return _error(404, f"unknown image id {image_id!r}")
        else:
            raw = await file.read()
            try:
                img = coerce_image(raw)
            except (UnsupportedFormatError, CorruptDataError) as exc:
                return _error(400, str(exc))
            fv = extract_features(img, store.config, id=file.filename or "upload")

        try:
            results = rank(fv, store, spec)
        except (MissingFeatureError, ValueError) as exc:
            return _error(400, str(exc))
        return {
            "results": [
                {
                    "id": r.id,
                    "label": r.label,
                    "distance": r.total_distance,
                    "per_feature": r.per_feature,
                    "thumb_url": f"/api/images/{r.id}/thumb",
                }
                for r in results
            ]
        }

    if assets_dir is not None:
        app.mount("/", StaticFiles(directory=assets_dir, html=True), name="assets")

    return app
