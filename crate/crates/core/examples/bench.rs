// A small timing run written as CSV to standard output.

use pell::pke::SchemeId;

fn main() {
    let report = pell::bench::bench(&SchemeId::ALL, &[64, 128], 3, 0).unwrap();
    report.write_csv(std::io::stdout()).unwrap();
}
