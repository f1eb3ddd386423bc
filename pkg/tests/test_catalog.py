"""Tests for the built-in process models and shipped fixtures."""

import pytest

from procverify.catalog import (
    MUTANT_EXPECTATIONS,
    example_traces,
    fixture_path,
    init_example,
)
from procverify.conformance import check_trace, summarize
from procverify.constants import EXAMPLE_FILES
from procverify.dsl import print_model
from procverify.semantics import ElementState
from procverify.validation import validate


class TestMlDevProcess:
    """Test the ML development catalog."""

    def test_well_formed(self, ml_dev):
        """The catalog passes every well-formedness rule without warnings."""
        report = validate(ml_dev)
        assert report.is_well_formed
        assert report.warnings == ()

    def test_shape(self, ml_dev):
        """13 activities, 19 artifacts, 4 external artifacts and 3 feedback loops."""
        assert len(ml_dev.activities()) == 13
        assert len(ml_dev.artifacts()) == 19
        assert sum(1 for a in ml_dev.artifacts() if a.external) == 4
        assert len(ml_dev.feedback) == 3

    def test_training_prerequisites(self, ml_dev):
        """Training needs the initial model, hyper-parameters and training data."""
        assert ml_dev.pre("training") == ("hyper_parameters", "initial_ml_model", "training_data")

    def test_dependents(self, ml_dev):
        """The factory seal feeds on-site target definition; the monitoring report feeds nothing."""
        assert ml_dev.post("factory_quality_seal") == ("onsite_target_definition",)
        assert ml_dev.post("monitoring_report") == ()

    def test_external_inputs_have_no_producer(self, ml_dev):
        """External artifacts are supplied from outside the process."""
        for element in ml_dev.artifacts():
            if element.external:
                assert ml_dev.producers(element.id) == ()


class TestMarlProcess:
    """Test the multi-agent reinforcement learning catalog."""

    def test_well_formed(self, marl):
        """The MARL catalog is well-formed."""
        assert validate(marl).is_well_formed

    def test_feedback_targets(self, marl):
        """All three loops start at the evaluation verdict."""
        assert {note.source for note in marl.feedback} == {"evaluation_verdict"}
        assert {note.target for note in marl.feedback} == {
            "derive_reward",
            "define_training_target",
            "configure_environment",
        }


class TestExampleTraces:
    """Test the built-in example traces."""

    @pytest.mark.parametrize("name", ["happy_path", "feedback_retune"])
    def test_ml_dev_examples_conform(self, ml_dev, traces, name):
        """Non-mutant traces conform."""
        assert check_trace(ml_dev, traces[name]).is_conforming

    def test_retune_trains_twice(self, traces):
        """The retune loop runs training a second time."""
        summary = summarize(traces["feedback_retune"])
        assert summary["training"].activations == 2
        assert summary["trained_ml_model"].final_state is ElementState.DONE

    def test_mutants_listed(self, traces):
        """Every mutant trace has a designated rule."""
        mutants = {name for name in traces if name.startswith("mutant_")}
        assert mutants == set(MUTANT_EXPECTATIONS)

    def test_builtins_are_fresh(self):
        """Each call builds new trace objects with equal content."""
        first, second = example_traces(), example_traces()
        assert first == second
        assert first["happy_path"] is not second["happy_path"]


class TestFixtureFiles:
    """Test that shipped text files match the built-in objects."""

    def test_model_files_are_printed_catalogs(self, ml_dev, marl):
        """ml_dev.proc and marl.proc are the canonical prints of the catalogs."""
        assert fixture_path("ml_dev.proc").read_text(encoding="utf-8") == print_model(ml_dev)
        assert fixture_path("marl.proc").read_text(encoding="utf-8") == print_model(marl)

    def test_every_example_file_exists(self):
        """EXAMPLE_FILES names only shipped files."""
        for filenames in EXAMPLE_FILES.values():
            for filename in filenames:
                assert fixture_path(filename).is_file()

    def test_every_trace_is_listed(self, traces):
        """Every built-in trace ships as a file of some example."""
        listed = {name for names in EXAMPLE_FILES.values() for name in names}
        assert {f"{name}.trace" for name in traces} <= listed

    def test_unknown_fixture(self):
        """Unknown fixture names raise FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            fixture_path("missing.trace")


class TestInitExample:
    """Test copying examples out of the package."""

    def test_copies_files(self, tmp_path):
        """All files of the example are written with identical content."""
        written = init_example("ml_dev", tmp_path / "out")
        assert [p.name for p in written] == EXAMPLE_FILES["ml_dev"]
        for path in written:
            assert path.read_bytes() == fixture_path(path.name).read_bytes()

    def test_existing_destination(self, tmp_path):
        """Copying twice into the same directory overwrites."""
        init_example("marl", tmp_path)
        assert len(init_example("marl", tmp_path)) == 3

    def test_unknown_example(self, tmp_path):
        """Only the shipped examples can be copied."""
        with pytest.raises(ValueError, match="unknown example 'robotics'"):
            init_example("robotics", tmp_path)
