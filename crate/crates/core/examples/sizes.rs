// Serialized key, plaintext and ciphertext sizes of the three schemes.

fn main() {
    for n in [128, 256, 512] {
        let rows = pell::bench::measure_sizes(n).unwrap();
        print!("{}", pell::bench::format_sizes(&rows));
    }
}
