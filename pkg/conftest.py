import sys
from pathlib import Path

# Make the src layout importable without an install.
sys.path.insert(0, str(Path(__file__).resolve().parent / "src"))
