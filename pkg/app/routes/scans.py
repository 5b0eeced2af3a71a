# app/routes/scans.py
# ------------------------------------------------------------
# /scan: run one scan synchronously and return its report.
# Meant for small lengths; long scans belong to the CLI.
# ------------------------------------------------------------

from __future__ import annotations

from fastapi import APIRouter, HTTPException
from fastapi.concurrency import run_in_threadpool

from app.errors import BracketError
from app.models.reports import ScanReport, ScanRequest
from app.routes.brackets import http_error
from app.services.scans import GEOMETRIC_KINDS, run_scan
from app.utils.config_loader import load_holonomy, load_surface
from app.utils.settings import DEFAULT_MAX_LEN

router = APIRouter()

MAX_API_SCAN_LEN = 5


@router.post("/scan", response_model=ScanReport)
async def scan(body: ScanRequest) -> ScanReport:
    if body.kind == "goldenset":
        raise HTTPException(status_code=400, detail="the golden set is run with verify-goldenset")
    max_len = body.max_len or min(DEFAULT_MAX_LEN.get(body.surface, 4), MAX_API_SCAN_LEN)
    if max_len > MAX_API_SCAN_LEN:
        raise HTTPException(status_code=400, detail=f"max_len above {MAX_API_SCAN_LEN} must be run from the CLI")
    try:
        s = load_surface(body.surface)
        rho = load_holonomy(s) if body.kind in GEOMETRIC_KINDS else None
        return await run_in_threadpool(run_scan, body.kind, s, max_len, rho=rho, jobs=1, seed=body.seed)
    except (BracketError, FileNotFoundError) as e:
        raise http_error(e)
