"""Figure and scenario plugins; discovered by figures.loader."""
