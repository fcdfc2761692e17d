# Adapters for snapshot files and CSV tables