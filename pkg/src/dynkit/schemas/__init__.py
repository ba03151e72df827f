"""JSON schemas for the CLI's ``--format json`` reports, one file per
subcommand. Load them through ``dynkit.cli.schema_for``."""
