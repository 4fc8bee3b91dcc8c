"""
Pruebas para la línea de comandos

Sub-comandos train, extract, evaluate, traverse y render, y códigos de salida.
"""

import json

import pytest

from app.cli import main
from app.services.causal_graph import import_graph
from app.services.corpus_service import CorpusService
from tests.conftest import FIXTURES_DIR


def _error_payload(stderr: str) -> dict:
    lines = [line for line in stderr.splitlines() if line.startswith("{") and '"error_type"' in line]
    return json.loads(lines[-1])


@pytest.fixture
def fake_settings_file(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({
        "encoder_name": "fake:128",
        "learning_rate": 0.05,
        "dropout": 0.0,
        "warmup_proportion": 0.0,
        "weight_decay": 0.0,
        "batch_size": 1,
        "width_embedding_dim": 4,
    }), encoding="utf-8")
    return path


@pytest.fixture
def single_sentence_corpus(tmp_path, movement_sentence):
    path = tmp_path / "movement.json"
    path.write_bytes(CorpusService.write_corpus([movement_sentence]))
    return path


# ============================================================================
# ✅ CASOS EXITOSOS
# ============================================================================

def test_evaluate_gold_against_itself(capsys, claims_corpus_path):
    """
    ID: CLI-001
    Nombre: Evaluar el gold contra sí mismo da 100.00
    """
    code = main(["evaluate", "--corpus", str(claims_corpus_path), "--pred", str(claims_corpus_path)])

    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("entities")
    assert [line.split()[-2] for line in out.splitlines() if line.startswith("micro avg")] == ["100.00"] * 3


def test_evaluate_json_report(capsys, tmp_path, claims_corpus_path):
    """
    ID: CLI-002
    Nombre: Reporte JSON en stdout o en archivo con tabla al lado
    """
    code = main([
        "evaluate", "--corpus", str(claims_corpus_path), "--pred", str(claims_corpus_path),
        "--format", "json", "--schema", "scientific-claims",
    ])
    report = json.loads(capsys.readouterr().out)

    assert code == 0
    assert report["sentences"] == 2
    assert report["relations"]["micro"]["f1"] == 1.0
    assert len(report["entities"]["rows"]) == 6

    out = tmp_path / "reports" / "eval.json"
    assert main(["evaluate", "--corpus", str(claims_corpus_path), "--pred", str(claims_corpus_path), "--out", str(out)]) == 0
    assert json.loads(out.read_text(encoding="utf-8"))["entities"]["micro"]["f1"] == 1.0
    assert out.with_suffix(".txt").read_text(encoding="utf-8") == capsys.readouterr().out


def test_render_corpus(capsys, tmp_path, ethnographic_corpus_path):
    """
    ID: CLI-003
    Nombre: Renderizar un corpus como DOT y como JSON
    """
    assert main(["render", "--corpus", str(ethnographic_corpus_path)]) == 0
    dot = capsys.readouterr().out

    out = tmp_path / "graph.json"
    assert main(["render", "--corpus", str(ethnographic_corpus_path), "--format", "json", "--out", str(out)]) == 0
    graph = import_graph(out.read_text(encoding="utf-8"))

    assert dot.startswith("digraph causal_graph {")
    assert dot.count("->") == 12
    assert len(graph.nodes) == 15


def test_traverse_pray_to_pregnant(capsys, ethnographic_corpus_path):
    """
    ID: CLI-004
    Nombre: traverse pray pregnant produce un DOT no vacío
    """
    code = main(["traverse", "pray", "pregnant", "--corpus", str(ethnographic_corpus_path)])

    dot = capsys.readouterr().out
    assert code == 0
    assert dot.count("->") == 5
    assert "forPurpose" in dot
    assert "label=modifier" not in dot


def test_traverse_json_with_vector_matcher(capsys, ethnographic_corpus_path):
    """
    ID: CLI-005
    Nombre: traverse con coincidencia vectorial y codificador de hashing
    """
    code = main([
        "traverse", "prayed", "pregnancy", "--corpus", str(ethnographic_corpus_path),
        "--matcher", "vector", "--encoder", "fake:16", "--threshold", "0.9", "--format", "json",
    ])

    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["source"] == "prayed"
    assert payload["destination"] == "pregnancy"
    assert "paths" in payload and "graph" in payload


def test_train_then_extract_reproduces_gold(capsys, tmp_path, fake_settings_file, single_sentence_corpus, movement_sentence):
    """
    ID: CLI-006
    Nombre: Entrenar sobre una oración y extraerla reproduce su grafo
    """
    model_dir = tmp_path / "model"
    predictions = tmp_path / "pred.json"

    code = main([
        "train", "--corpus", str(single_sentence_corpus), "--model-dir", str(model_dir),
        "--config", str(fake_settings_file), "--epochs", "200", "--max-span-len", "4", "--seed", "3",
    ])
    assert code == 0
    assert {p.name for p in model_dir.iterdir()} >= {"model.pt", "config.json", "loss_log.json"}
    losses = [entry["loss"] for entry in json.loads((model_dir / "loss_log.json").read_text())["epochs"]]
    assert len(losses) == 200
    assert losses[-1] < losses[0]

    assert main(["extract", "--corpus", str(single_sentence_corpus), "--model-dir", str(model_dir), "--out", str(predictions)]) == 0
    extracted = CorpusService.load_corpus(predictions.read_bytes())
    assert extracted[0].sentence_id == movement_sentence.sentence_id
    assert extracted[0].gold == movement_sentence.gold

    capsys.readouterr()
    assert main(["evaluate", "--corpus", str(single_sentence_corpus), "--model-dir", str(model_dir)]) == 0
    assert "100.00" in capsys.readouterr().out


def test_train_extract_is_deterministic(tmp_path, claims_corpus_path):
    """
    ID: CLI-007
    Nombre: Dos entrenamientos con la misma semilla producen la misma extracción
    """
    outputs = []
    for run in ("a", "b"):
        model_dir = tmp_path / run
        assert main([
            "train", "--corpus", str(claims_corpus_path), "--model-dir", str(model_dir),
            "--encoder", "fake:8", "--epochs", "2", "--max-span-len", "3", "--seed", "5",
        ]) == 0
        out = tmp_path / f"{run}.json"
        assert main([
            "extract", "--corpus", str(FIXTURES_DIR / "sentences.txt"), "--model-dir", str(model_dir), "--out", str(out),
        ]) == 0
        outputs.append((out.read_bytes(), (model_dir / "loss_log.json").read_bytes()))

    assert outputs[0] == outputs[1]
    extracted = CorpusService.load_corpus(outputs[0][0])
    assert [s.sentence_id for s in extracted] == ["0", "1"]
    assert extracted[0].tokens[:2] == ("Movement", "restriction")


def test_train_with_holdout(tmp_path, claims_corpus_path):
    """
    ID: CLI-008
    Nombre: --holdout escribe la partición de prueba junto al checkpoint
    """
    model_dir = tmp_path / "model"

    code = main([
        "train", "--corpus", str(claims_corpus_path), "--model-dir", str(model_dir),
        "--encoder", "fake:8", "--epochs", "1", "--max-span-len", "2", "--holdout",
    ])

    test_split = CorpusService.load_corpus((model_dir / "test_split.json").read_bytes())
    assert code == 0
    assert len(test_split) == 1


def test_evaluate_txt_report_keeps_json(capsys, tmp_path, claims_corpus_path):
    """
    ID: CLI-017
    Nombre: Con --out report.txt el JSON no se sobrescribe con la tabla
    """
    out = tmp_path / "report.txt"
    code = main(["evaluate", "--corpus", str(claims_corpus_path), "--pred", str(claims_corpus_path), "--out", str(out)])
    table = capsys.readouterr().out

    assert code == 0
    assert json.loads(out.read_text(encoding="utf-8"))["sentences"] == 2
    assert (tmp_path / "report.txt.txt").read_text(encoding="utf-8") == table


def test_help_exits_zero(capsys):
    """
    ID: CLI-009
    Nombre: --help termina con código 0
    """
    assert main(["--help"]) == 0
    assert "traverse" in capsys.readouterr().out


# ============================================================================
# ❌ CASOS DE ERROR
# ============================================================================

def test_usage_errors_exit_one(capsys):
    """
    ID: CLI-010
    Nombre: Invocaciones incorrectas terminan con código 1
    """
    assert main([]) == 1
    assert main(["render", "--bogus"]) == 1
    assert main(["train"]) == 1

    payload = _error_payload(capsys.readouterr().err)
    assert payload["success"] is False
    assert payload["exit_code"] == 1
    assert payload["error_type"] == "UsageError"
    assert payload["run_id"]


def test_missing_file_exits_one(capsys, tmp_path):
    """
    ID: CLI-011
    Nombre: Archivo de entrada inexistente termina con código 1
    """
    assert main(["render", "--corpus", str(tmp_path / "missing.json")]) == 1

    assert _error_payload(capsys.readouterr().err)["error_type"] == "NotFoundError"


def test_invalid_setting_exits_one(capsys, tmp_path, ethnographic_corpus_path):
    """
    ID: CLI-012
    Nombre: Configuración inválida termina con código 1
    """
    assert main(["traverse", "pray", "pregnant", "--corpus", str(ethnographic_corpus_path), "--max-hops", "0"]) == 1
    assert main(["render", "--corpus", str(ethnographic_corpus_path), "--schema", "unknown-schema"]) == 1
    assert main(["render", "--corpus", str(ethnographic_corpus_path), "--out", str(tmp_path)]) == 1

    assert _error_payload(capsys.readouterr().err)["error_type"] == "UsageError"


def test_bad_data_exits_two(capsys, tmp_path, claims_corpus_path):
    """
    ID: CLI-013
    Nombre: Datos mal formados o desalineados terminan con código 2
    """
    broken = tmp_path / "broken.json"
    broken.write_text('[{"tokens": ["a"],}]', encoding="utf-8")
    other = tmp_path / "other.json"
    other.write_text(json.dumps([{"tokens": ["a"]}]), encoding="utf-8")

    assert main(["render", "--corpus", str(broken)]) == 2
    assert _error_payload(capsys.readouterr().err)["error_type"] == "ParseError"
    assert main(["evaluate", "--corpus", str(claims_corpus_path), "--pred", str(other)]) == 2
    assert _error_payload(capsys.readouterr().err)["error_type"] == "AlignmentError"


def test_extract_without_checkpoint(capsys, tmp_path, claims_corpus_path):
    """
    ID: CLI-014
    Nombre: extract con directorio de modelo vacío termina con código 1
    """
    empty = tmp_path / "empty"
    empty.mkdir()

    assert main(["extract", "--corpus", str(claims_corpus_path), "--model-dir", str(empty)]) == 1
    assert _error_payload(capsys.readouterr().err)["error_type"] == "NotFoundError"


def test_invalid_environment_value_exits_one(capsys, monkeypatch, claims_corpus_path):
    """
    ID: CLI-015
    Nombre: Variable SPEAR_* inválida termina con código 1 y error JSON
    """
    import app.core.config as config_module

    monkeypatch.setenv("SPEAR_EPOCHS", "0")

    assert not hasattr(config_module, "settings")
    assert main(["render", "--corpus", str(claims_corpus_path)]) == 1
    payload = _error_payload(capsys.readouterr().err)
    assert payload["error_type"] == "ConfigError"
    assert "EPOCHS" in payload["error"]


def test_non_utf8_text_input_exits_two(capsys, tmp_path):
    """
    ID: CLI-016
    Nombre: Archivo de oraciones con bytes no UTF-8 termina con código 2
    """
    sentences = tmp_path / "latin1.txt"
    sentences.write_bytes("Caf\xe9 reduced stress .\n".encode("latin-1"))
    model_dir = tmp_path / "model"
    model_dir.mkdir()

    assert main(["extract", "--corpus", str(sentences), "--model-dir", str(model_dir)]) == 2
    assert _error_payload(capsys.readouterr().err)["error_type"] == "ParseError"
