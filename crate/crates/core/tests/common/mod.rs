//! A three-file project whose compile and test scripts react to specific
//! mutations, so every verdict is predictable.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Output;

pub const CALC: &str = "package com.example;

public class Calc {
    // a - b would be wrong here
    public int add(int a, int b) {
        return a + b;
    }

    public int next(int count) {
        count++;
        return count;
    }
}
";

pub const LOGIC: &str = "package com.example;

public class Logic {
    private final String label = \"i < n\";

    public boolean within(int i, int n) {
        return i < n && !flag(i);
    }

    private boolean flag(int i) {
        return i >= 0;
    }
}
";

pub const EMPTY: &str = "package com.example;

public interface Empty {
    void run();
}
";

/// `count--` does not compile.
pub const COMPILE_SH: &str = "grep -q 'count--' src/com/example/Calc.java && exit 1
exit 0
";

/// Any change to `a + b` and turning `&&` into `||` fail the tests;
/// `i > n` hangs.
pub const TEST_SH: &str = "grep -q 'return a + b;' src/com/example/Calc.java || exit 1
grep -q 'i > n &&' src/com/example/Logic.java && sleep 30
grep -q 'i < n ||' src/com/example/Logic.java && exit 1
exit 0
";

/// Verdict counts the scripts above produce over all 17 mutants.
pub const EXPECTED_TOTAL: usize = 17;
pub const EXPECTED_KILLED: usize = 5;
pub const EXPECTED_SURVIVED: usize = 10;
pub const EXPECTED_INVALID: usize = 1;
pub const EXPECTED_TIMEOUT: usize = 1;

pub const BRANCH_CSV: &str = "class,branches_covered,branches_total
com.example.Calc,0,0
com.example.Logic,3,4
com.example.Stray,1,2
";

pub const SOURCES: [(&str, &str); 3] = [
    ("src/com/example/Calc.java", CALC),
    ("src/com/example/Logic.java", LOGIC),
    ("src/com/example/Empty.java", EMPTY),
];

pub struct Fixture {
    pub dir: tempfile::TempDir,
}

impl Fixture {
    /// Writes the project and a config with `extra` JSON fields merged in.
    pub fn new(extra: &str) -> Fixture {
        Fixture::with_scripts(COMPILE_SH, TEST_SH, extra)
    }

    pub fn with_scripts(compile: &str, test: &str, extra: &str) -> Fixture {
        let dir = tempfile::tempdir().unwrap();
        let write = |rel: &str, body: &str| {
            let p = dir.path().join(rel);
            std::fs::create_dir_all(p.parent().unwrap()).unwrap();
            std::fs::write(p, body).unwrap();
        };
        for (rel, body) in SOURCES {
            write(rel, body);
        }
        write("compile.sh", compile);
        write("test.sh", test);
        write("branches.csv", BRANCH_CSV);
        let extra = if extra.is_empty() { String::new() } else { format!(",{extra}") };
        write(
            "mutcov.json",
            &format!(
                r#"{{"source_root":"src","compile_cmd":"sh compile.sh","test_cmd":"sh test.sh","seed":7{extra}}}"#
            ),
        );
        Fixture { dir }
    }

    pub fn path(&self) -> &Path {
        self.dir.path()
    }

    pub fn config(&self) -> PathBuf {
        self.path().join("mutcov.json")
    }

    pub fn file(&self, rel: &str) -> PathBuf {
        self.path().join(rel)
    }

    pub fn sources_pristine(&self) -> bool {
        SOURCES
            .iter()
            .all(|(rel, body)| std::fs::read_to_string(self.file(rel)).unwrap() == *body)
    }

    pub fn mutcov(&self, args: &[&str]) -> Output {
        std::process::Command::new(env!("CARGO_BIN_EXE_mutcov"))
            .current_dir(self.path())
            .arg("--config")
            .arg(self.config())
            .args(args)
            .output()
            .expect("spawn mutcov")
    }
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}
