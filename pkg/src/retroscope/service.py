"""HTTP JSON service powering the dashboard.

Stateless between requests apart from the immutable loaded corpus snapshot;
identical request bodies (including the seed) yield identical response
bodies. Status codes: 400 invalid body, 404 unknown dataset, 422 analysis
precondition failure or over-budget request.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Optional, Union

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import ENGINE_VERSION
from .config import ALLOWED_KS, ANALYSES, MODE_CHOICES, PLATFORM_CHOICES, RunConfig
from .engine import EngineState, projected_permutation_work, run_analysis, series_payload
from .errors import ConfigurationError, DataError
from .report import stable_json


class AnalyzeRequest(BaseModel):
    movement: Optional[str] = None
    platform: str = "all"
    layer: int = Field(default=5, ge=0, le=8)
    mode: str = "cumulative"
    k: Optional[Union[int, list[int]]] = None
    ks: Optional[list[int]] = None
    alpha: float = Field(default=0.05, gt=0.0, lt=1.0)
    permutations: Optional[int] = Field(default=None, ge=1)
    bootstrap_iters: Optional[int] = Field(default=None, ge=1)
    seed: int = 0
    workers: int = Field(default=1, ge=1)

    def window_sizes(self, analysis: str) -> tuple[int, ...]:
        raw = self.ks if self.ks is not None else self.k
        if raw is None:
            return (7,) if analysis in ("h2", "h3", "h5") else ALLOWED_KS
        if isinstance(raw, int):
            return (raw,)
        return tuple(int(v) for v in raw)


def _json_response(payload_text: str, status_code: int = 200) -> Response:
    return Response(content=payload_text, status_code=status_code,
                    media_type="application/json")


def create_app(state: EngineState, base_config: RunConfig) -> FastAPI:
    app = FastAPI(title="retroscope", version=ENGINE_VERSION, docs_url=None, redoc_url=None)
    default_seed = base_config.seed

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": "invalid request body", "details": exc.errors()},
        )

    @app.exception_handler(DataError)
    async def on_data_error(request: Request, exc: DataError):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.exception_handler(ConfigurationError)
    async def on_config_error(request: Request, exc: ConfigurationError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.get("/health")
    def health():
        return {"status": "ok", "engine_version": ENGINE_VERSION, "seed": default_seed}

    @app.get("/datasets")
    def datasets():
        return {
            "engine_version": ENGINE_VERSION,
            "seed": default_seed,
            "datasets": state.dataset_summaries(),
            "layers": list(range(9)),
            "modes": list(MODE_CHOICES),
            "ks": list(ALLOWED_KS),
        }

    @app.get("/events")
    def events():
        return {
            "engine_version": ENGINE_VERSION,
            "seed": default_seed,
            "events": [ev.to_dict() for ev in state.events],
        }

    @app.get("/series")
    def series(dataset: str, layer: int = 5, mode: str = "cumulative"):
        movement_name, platform = _parse_dataset(dataset)
        if mode not in MODE_CHOICES:
            raise ConfigurationError(f"mode must be one of {MODE_CHOICES}")
        if not 0 <= layer <= 8:
            raise ConfigurationError("layer must be in 0..8")
        if movement_name not in state.movements or platform not in PLATFORM_CHOICES:
            return JSONResponse(status_code=404,
                                content={"error": f"unknown dataset {dataset!r}"})
        data = series_payload(state.dataset_series(movement_name, platform, layer, mode))
        data["seed"] = default_seed
        return _json_response(stable_json(data))

    @app.post("/analyze/{analysis}")
    def analyze(analysis: str, body: AnalyzeRequest):
        if analysis not in ANALYSES:
            return JSONResponse(status_code=404,
                                content={"error": f"unknown analysis {analysis!r}"})
        movement_name = body.movement or _default_movement()
        if movement_name not in state.movements:
            return JSONResponse(status_code=404,
                                content={"error": f"unknown movement {movement_name!r}"})
        config = replace(
            base_config,
            movement=state.movements[movement_name],
            platform=body.platform,
            layer=body.layer,
            mode=body.mode,
            ks=body.window_sizes(analysis),
            alpha=body.alpha,
            permutations=body.permutations,
            bootstrap_iters=body.bootstrap_iters,
            seed=body.seed,
            workers=body.workers,
        )
        try:
            config = config.validate()
        except ConfigurationError as exc:
            return JSONResponse(status_code=400, content={"error": str(exc)})
        work = projected_permutation_work(analysis, config, len(state.events))
        if work > base_config.service.max_permutation_work:
            return JSONResponse(
                status_code=422,
                content={
                    "error": "request over permutation budget",
                    "projected_work": work,
                    "budget": base_config.service.max_permutation_work,
                },
            )
        payload = run_analysis(state, analysis, config)
        return _json_response(stable_json(payload))

    def _default_movement() -> str:
        if base_config.movement is not None:
            return base_config.movement.name
        return sorted(state.movements)[0]

    def _parse_dataset(dataset: str) -> tuple[str, str]:
        if ":" in dataset:
            movement_name, platform = dataset.split(":", 1)
        else:
            movement_name, platform = dataset, "all"
        return movement_name, platform

    frontend = base_config.service.frontend_dir
    if frontend is not None and frontend.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/app", StaticFiles(directory=frontend, html=True), name="dashboard")

    return app
