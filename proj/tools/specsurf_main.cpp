// Placeholder; the CLI driver lands with the cli module.
int main() { return 0; }
