// placeholder, built out after core
