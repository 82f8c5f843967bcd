"""Tests for the QuantArgumentParser constructor."""

import pytest

import src.arg_parser as ap

COMMANDS = ["eval", "empty", "universal", "compare", "range", "sync-check", "compile", "domain", "oracle", "batch"]


@pytest.mark.fast
def test_constructor_initialization() -> None:
    """Test that the constructor properly initializes the parser."""
    parser = ap.QuantArgumentParser()

    assert parser is not None
    assert hasattr(parser, "parser")
    assert parser.parser is not None


@pytest.mark.fast
def test_parser_description() -> None:
    """Test that the parser has the correct description."""
    help_text = ap.QuantArgumentParser().get_help_text()

    assert "Quantitative expressions" in help_text
    assert "weighted chop automata" in help_text


@pytest.mark.fast
def test_parser_formatter_class() -> None:
    """Test that the parser uses a callable formatter class."""
    parser = ap.QuantArgumentParser()

    assert callable(parser.parser.formatter_class)


@pytest.mark.fast
def test_parser_arguments_initialized() -> None:
    """Test that the global flags and every command are declared."""
    help_text = ap.QuantArgumentParser().get_help_text()

    for flag in ["--config", "--backend", "--max-steps", "--format", "--tokens", "--trace", "--verbose", "--jobs", "--version"]:
        assert flag in help_text
    for command in COMMANDS:
        assert command in help_text


@pytest.mark.fast
def test_multiple_instances_independent() -> None:
    """Test that multiple parser instances are independent."""
    parser1 = ap.QuantArgumentParser()
    parser2 = ap.QuantArgumentParser()

    assert parser1 is not parser2
    assert parser1.parser is not parser2.parser
