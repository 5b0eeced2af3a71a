from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from dotenv import load_dotenv

# Load environment variables early (surface dir, log level, halo settings)
load_dotenv()

from app.utils.settings import configure_logging  # noqa: E402

configure_logging()

app = FastAPI(title="Curve bracket service")

# --- CORS -----------------------------------------------------------------
ALLOWED_ORIGINS = [
    "http://localhost:3000",
    "http://127.0.0.1:3000",
]

app.add_middleware(
    CORSMiddleware,
    allow_origins=ALLOWED_ORIGINS,
    allow_credentials=True,
    allow_methods=["GET", "POST", "OPTIONS"],
    allow_headers=["*"],
)


@app.get("/")
async def home():
    return {"message": "Curve bracket service is running. Try /surfaces or /docs"}


@app.get("/health")
async def health():
    return {"ok": True}


# --- Routers --------------------------------------------------------------
from app.routes import brackets, scans  # noqa: E402

app.include_router(brackets.router, tags=["brackets"])
app.include_router(scans.router, tags=["scans"])
