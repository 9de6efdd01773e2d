fn main() {
    // placeholder; filled in once the CLI module lands
}
