use std::io;

use fermat5::classify::GradedClassifier;

fn main() {
    let code = fermat5_cli::run(
        std::env::args_os(),
        &GradedClassifier,
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    std::process::exit(code);
}
