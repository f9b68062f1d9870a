"""HTTP service exposing the experiment harness.

Every experiment endpoint accepts the same JSON body (the config blocks
documented in :mod:`skynoise.config`) and returns the result rows, the
canonical CSV rendering, and optional base64-encoded SKGF field dumps.
"""

from __future__ import annotations

import base64

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .config import ConfigError, config_from_dict
from .experiments import (
    EXPERIMENTS,
    field_dump_payload,
    oracle_residuals_csv,
    verify_report,
)


class ExperimentRequest(BaseModel):
    grid: dict = Field(default_factory=dict)
    state: dict = Field(default_factory=dict)
    channels: dict = Field(default_factory=dict)
    run: dict = Field(default_factory=dict)


class RowModel(BaseModel):
    experiment: str
    channel: str
    sweep_value: float
    l1: int
    l2: int
    n_initial: float
    n_final: float
    valid_fraction: float
    wall_time_s: float


class ExperimentResponse(BaseModel):
    rows: list[RowModel]
    csv: str
    extras: dict = Field(default_factory=dict)
    dumps: dict[str, str] = Field(default_factory=dict)  # name -> base64 SKGF


class OracleRequest(BaseModel):
    nx: int = 32
    extent: float = 5.0
    samples: int = 200
    seed: int = 7


class OracleResponse(BaseModel):
    csv: str


class VerifyResponse(BaseModel):
    channels: dict


def _parse(req: ExperimentRequest, experiment: str):
    body = req.model_dump()
    body.setdefault("run", {})["experiment"] = experiment
    try:
        return config_from_dict(body)
    except (ConfigError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


def create_app() -> FastAPI:
    app = FastAPI(title="skynoise", version=__version__)

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "version": __version__}

    def register(experiment: str):
        @app.post(f"/{experiment}", response_model=ExperimentResponse,
                  name=experiment)
        def run(req: ExperimentRequest, experiment=experiment):
            cfg = _parse(req, experiment)
            try:
                result = EXPERIMENTS[experiment](cfg)
            except (ValueError, FloatingPointError) as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            dumps = {}
            if cfg.run.dump_fields:
                dumps = {name: base64.b64encode(blob).decode("ascii")
                         for name, blob in field_dump_payload(cfg).items()}
            # JSON cannot carry NaN; substitute the schema's "no sweep axis"
            rows = []
            for r in result.rows:
                d = r.__dict__.copy()
                if d["sweep_value"] != d["sweep_value"]:
                    d["sweep_value"] = -1.0
                rows.append(RowModel(**d))
            return ExperimentResponse(rows=rows, csv=result.csv(),
                                      extras=result.extras, dumps=dumps)

    for name in EXPERIMENTS:
        register(name)

    @app.post("/oracle", response_model=OracleResponse)
    def oracle(req: OracleRequest):
        return OracleResponse(csv=oracle_residuals_csv(
            nx=req.nx, extent=req.extent, samples=req.samples, seed=req.seed))

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: ExperimentRequest):
        cfg = _parse(req, "simulate")
        return VerifyResponse(channels=verify_report(cfg))

    return app


app = create_app()
