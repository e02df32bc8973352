"""Command-line client for the pipeline.

Subcommands mirror the service endpoints one to one. By default jobs run
in process; with ``--server`` the same request is POSTed to a running
service instance. Exit codes: 0 ok, 1 validation failure, 2 I/O error.
"""

import argparse
import json
import sys

from pydantic import BaseModel, ValidationError

from . import __version__
from .errors import DataError, FileFormatError
from .pipeline import (
    AugmentRequest,
    EstimateRequest,
    MixRequest,
    ReconstructRequest,
    SpatializeRequest,
    ValidateRequest,
    run_augment,
    run_estimate,
    run_mix,
    run_reconstruct,
    run_spatialize,
    run_validate,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def _add_job_options(p: argparse.ArgumentParser):
    p.add_argument("--config", help="YAML/JSON pipeline config file")
    p.add_argument("--seed", type=int, help="global seed override")
    p.add_argument("--jobs", type=int, help="parallel worker count")
    p.add_argument("--subset-talkers", type=int, help="use only N seeded-sampled talkers")
    p.add_argument(
        "--subset-utterances", type=int, help="use only N seeded-sampled utterances per talker"
    )
    p.add_argument("--server", help="base URL of a running service to send the job to")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ownvoice",
        description="Own-voice transfer characteristic models and data augmentation",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate transfer characteristic models")
    p.add_argument("pairs_manifest", help="recorded-pairs manifest")
    p.add_argument("--out", required=True, help="output directory for model files")
    _add_job_options(p)

    p = sub.add_parser("augment", help="simulate in-ear own voice for a speech corpus")
    p.add_argument("speech_manifest", help="speech-corpus manifest")
    p.add_argument("model_path", help="transfer characteristic model file")
    p.add_argument("--out", required=True, help="output directory")
    _add_job_options(p)

    p = sub.add_parser("spatialize", help="render single-channel noise to microphone pairs")
    p.add_argument("noise_manifest", help="noise manifest")
    p.add_argument("hrir_manifest", help="HRIR manifest")
    p.add_argument("--out", required=True, help="output directory")
    _add_job_options(p)

    p = sub.add_parser("mix", help="build SNR-controlled noisy training examples")
    p.add_argument("pairs_manifest", help="own-voice pairs manifest")
    p.add_argument("noise_manifest", help="noise manifest")
    p.add_argument("hrir_manifest", help="HRIR manifest")
    p.add_argument("--out", required=True, help="output directory")
    _add_job_options(p)

    p = sub.add_parser("reconstruct", help="apply a complex-mask file to a noisy pair")
    p.add_argument("noisy_outer", help="noisy outer-microphone WAV")
    p.add_argument("noisy_inear", help="noisy in-ear-microphone WAV")
    p.add_argument("mask_path", help="mask container file")
    p.add_argument("--out", required=True, help="output WAV path")
    p.add_argument("--server", help="base URL of a running service to send the job to")

    p = sub.add_parser("validate", help="check manifests, model and mask files")
    p.add_argument("paths", nargs="+", help="files to validate")
    p.add_argument("--server", help="base URL of a running service to send the job to")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _job_fields(args) -> dict:
    return {
        "config_path": args.config,
        "seed": args.seed,
        "jobs": args.jobs,
        "subset_talkers": args.subset_talkers,
        "subset_utterances": args.subset_utterances,
    }


def _build_request(args) -> tuple[str, BaseModel]:
    if args.command == "estimate":
        return "estimate", EstimateRequest(
            pairs_manifest=args.pairs_manifest, out_dir=args.out, **_job_fields(args)
        )
    if args.command == "augment":
        return "augment", AugmentRequest(
            speech_manifest=args.speech_manifest,
            model_path=args.model_path,
            out_dir=args.out,
            **_job_fields(args),
        )
    if args.command == "spatialize":
        return "spatialize", SpatializeRequest(
            noise_manifest=args.noise_manifest,
            hrir_manifest=args.hrir_manifest,
            out_dir=args.out,
            **_job_fields(args),
        )
    if args.command == "mix":
        return "mix", MixRequest(
            pairs_manifest=args.pairs_manifest,
            noise_manifest=args.noise_manifest,
            hrir_manifest=args.hrir_manifest,
            out_dir=args.out,
            **_job_fields(args),
        )
    if args.command == "reconstruct":
        return "reconstruct", ReconstructRequest(
            noisy_outer=args.noisy_outer,
            noisy_inear=args.noisy_inear,
            mask_path=args.mask_path,
            out_path=args.out,
        )
    if args.command == "validate":
        return "validate", ValidateRequest(paths=args.paths)
    raise AssertionError(args.command)


_RUNNERS = {
    "estimate": run_estimate,
    "augment": run_augment,
    "spatialize": run_spatialize,
    "mix": run_mix,
    "reconstruct": run_reconstruct,
    "validate": run_validate,
}


def _send_to_server(server: str, endpoint: str, request: BaseModel) -> int:
    import httpx

    url = server.rstrip("/") + "/" + endpoint
    response = httpx.post(url, json=request.model_dump(), timeout=None)
    if response.status_code == 200:
        body = response.json()
        print(json.dumps(body, indent=2, sort_keys=True))
        if endpoint == "validate" and not body.get("ok", False):
            return EXIT_VALIDATION
        return EXIT_OK
    detail = response.json().get("detail", response.text)
    print(f"error: {detail}", file=sys.stderr)
    return EXIT_IO if response.status_code == 400 else EXIT_VALIDATION


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        uvicorn.run("ownvoice.service:app", host=args.host, port=args.port)
        return EXIT_OK

    try:
        endpoint, request = _build_request(args)
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION

    if getattr(args, "server", None):
        return _send_to_server(args.server, endpoint, request)

    try:
        report = _RUNNERS[endpoint](request)
    except (DataError, ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except (FileFormatError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    print(report.model_dump_json(indent=2))
    if endpoint == "validate" and not report.ok:
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
