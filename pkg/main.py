"""
Command-line entry point.

Usage:
    python main.py train --corpus data/fixtures/claims_corpus.json --model-dir runs/claims
    python main.py extract --model-dir runs/claims --corpus sentences.txt --out predictions.json
    python main.py evaluate --corpus gold.json --pred predictions.json --out report.json
    python main.py traverse pray pregnant --corpus predictions.json --schema ethnographic
    python main.py render --corpus predictions.json --out graph.dot
"""

import sys
import warnings

from app.cli import main

# Suppress tokenizer fork warnings from transformers
warnings.filterwarnings("ignore", message=".*tokenizers.*fork.*")

if __name__ == "__main__":
    sys.exit(main())
