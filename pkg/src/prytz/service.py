"""Local JSON service exposing the engine to the tracing UI.

Stateless: every request is independent; all numbers in responses use the
same 17-significant-digit serialization as the CLI, so identical requests
get byte-identical responses. Binds to localhost by default.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from . import __version__, jsonio
from .dynamics import area_identity_report, integrate, trace_loop
from .errors import InputError
from .estimator import hill_predict, measure_once
from .geom2d import Point2, moments_about
from .holonomy import ConnectionParams, holonomy_curve, holonomy_polygon
from .menzin import ParallelogramSpec, parallelogram_holonomy


def _json_response(obj, status_code: int = 200) -> Response:
    return Response(content=jsonio.dumps(obj), status_code=status_code,
                    media_type="application/json")


def _error(status: int, code: str, message: str) -> Response:
    return _json_response({"code": code, "message": message}, status_code=status)


async def _body(request: Request) -> dict:
    try:
        obj = jsonio.loads((await request.body()).decode("utf-8"))
    except (UnicodeDecodeError, ValueError) as exc:
        raise _BadRequest(f"malformed JSON body: {exc}") from exc
    if not isinstance(obj, dict):
        raise _BadRequest("request body must be a JSON object")
    return obj


class _BadRequest(Exception):
    pass


def _float_field(obj: dict, key: str, default=None) -> float:
    if key not in obj:
        if default is None:
            raise InputError(f"missing required field '{key}'")
        return float(default)
    try:
        value = float(obj[key])
    except (TypeError, ValueError) as exc:
        raise InputError(f"field '{key}' must be a number") from exc
    if not math.isfinite(value):
        raise InputError(f"field '{key}' must be finite")
    return value


def create_app() -> FastAPI:
    app = FastAPI(title="prytz", version=__version__, docs_url=None, redoc_url=None)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    @app.exception_handler(_BadRequest)
    async def _bad_request_handler(request, exc):
        return _error(400, "bad_json", str(exc))

    @app.exception_handler(InputError)
    async def _input_error_handler(request, exc):
        return _error(422, "precondition_failed", str(exc))

    @app.get("/health")
    async def health():
        return _json_response({"status": "ok", "version": __version__})

    @app.post("/trace")
    async def trace(request: Request):
        obj = await _body(request)
        path = jsonio.path_from_obj(obj.get("path"))
        theta0 = _float_field(obj, "theta0")
        ell = _float_field(obj, "ell")
        step = _float_field(obj, "step", ell / 200.0)
        samples = int(obj.get("samples", 256))
        base_index = int(obj.get("base_index", 0))
        want_loop = bool(obj.get("loop", path.closed))
        if want_loop and not path.closed:
            raise InputError("loop tracing requires a closed path")
        if want_loop:
            report = area_identity_report(path, base_index, theta0, ell, step)
            payload = jsonio.trace_to_obj(report.trace, samples, report)
        else:
            payload = jsonio.trace_to_obj(integrate(path, theta0, ell, step), samples)
        payload["closed"] = want_loop
        return _json_response(payload)

    @app.post("/holonomy")
    async def holonomy_endpoint(request: Request):
        obj = await _body(request)
        path = jsonio.path_from_obj(obj.get("path"))
        ell = _float_field(obj, "ell")
        base_index = int(obj.get("base_index", 0))
        params = ConnectionParams(ell)
        if obj.get("ode"):
            step = _float_field(obj, "step", ell / 200.0)
            hol = holonomy_curve(path, base_index, params, step)
        else:
            hol = holonomy_polygon(path, base_index, params)
        return _json_response(jsonio.holonomy_to_obj(hol))

    @app.post("/menzin/parallelogram")
    async def menzin_parallelogram(request: Request):
        obj = await _body(request)
        try:
            v = (float(obj["v"][0]), float(obj["v"][1]))
            w = (float(obj["w"][0]), float(obj["w"][1]))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InputError(f"v and w must be [x, y] pairs: {exc}") from exc
        ell = _float_field(obj, "ell")
        report = parallelogram_holonomy(ParallelogramSpec(v, w, ell))
        return _json_response(jsonio.menzin_report_to_obj(report))

    @app.post("/estimate")
    async def estimate(request: Request):
        obj = await _body(request)
        path = jsonio.path_from_obj(obj.get("path"))
        if not path.closed:
            raise InputError("estimation requires a closed path")
        theta0 = _float_field(obj, "theta0")
        ell = _float_field(obj, "ell")
        step = _float_field(obj, "step", ell / 200.0)
        base_index = int(obj.get("base_index", 0))
        if obj.get("base") is not None:
            raw = obj["base"]
            base = Point2(float(raw[0]), float(raw[1]))
        else:
            base = Point2(*path.rolled(base_index).vertices[0])
        reading = measure_once(path, base_index, theta0, ell, step,
                               base if obj.get("base") is not None else None)
        opposite = measure_once(path, base_index, theta0 + math.pi, ell, step,
                                base if obj.get("base") is not None else None)
        moments = moments_about(path, base)
        pred = hill_predict(moments, base, theta0, ell)
        return _json_response({
            "reading": reading,
            "reading_opposite": opposite,
            "averaged_reading": 0.5 * (reading + opposite),
            "prediction": {
                "ell_sigma_predicted": pred.ell_sigma_predicted,
                "averaged_predicted": pred.averaged_predicted,
            },
            "area": moments.area,
            "moments": jsonio.moments_to_obj(moments),
            "base": [base.x, base.y],
            "theta0": theta0,
        })

    return app


app = create_app()
