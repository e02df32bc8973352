"""HTTP front-end for the batch pipeline.

Each endpoint wraps one pipeline job; request bodies reference manifests,
models and output directories on the filesystem shared with the service.
The CLI is a thin client of these endpoints (or calls the same job
functions in process).
"""

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .. import __version__
from ..errors import DataError, FileFormatError
from ..pipeline import (
    AugmentRequest,
    CorpusReport,
    EstimateReport,
    EstimateRequest,
    MixRequest,
    ReconstructReport,
    ReconstructRequest,
    SpatializeRequest,
    ValidateReport,
    ValidateRequest,
    run_augment,
    run_estimate,
    run_mix,
    run_reconstruct,
    run_spatialize,
    run_validate,
)


class HealthResponse(BaseModel):
    status: str
    version: str


def create_app() -> FastAPI:
    app = FastAPI(
        title="ownvoice",
        description="Own-voice transfer characteristic estimation and data augmentation",
        version=__version__,
    )

    @app.exception_handler(DataError)
    async def _data_error(request: Request, exc: DataError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(FileFormatError)
    async def _format_error(request: Request, exc: FileFormatError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(FileNotFoundError)
    async def _missing_file(request: Request, exc: FileNotFoundError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    @app.post("/estimate", response_model=EstimateReport)
    def estimate(req: EstimateRequest):
        return run_estimate(req)

    @app.post("/augment", response_model=CorpusReport)
    def augment(req: AugmentRequest):
        return run_augment(req)

    @app.post("/spatialize", response_model=CorpusReport)
    def spatialize(req: SpatializeRequest):
        return run_spatialize(req)

    @app.post("/mix", response_model=CorpusReport)
    def mix(req: MixRequest):
        return run_mix(req)

    @app.post("/reconstruct", response_model=ReconstructReport)
    def reconstruct(req: ReconstructRequest):
        return run_reconstruct(req)

    @app.post("/validate", response_model=ValidateReport)
    def validate(req: ValidateRequest):
        return run_validate(req)

    return app


app = create_app()
