"""Command-line front end, configuration, serialization and audits."""
