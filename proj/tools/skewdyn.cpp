// Placeholder main; replaced once the command layer lands.
int main() { return 0; }
