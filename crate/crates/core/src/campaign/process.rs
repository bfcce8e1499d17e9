//! Running one user-supplied command with an optional deadline.

use std::io;
use std::path::Path;
use std::process::{Command, ExitStatus, Stdio};
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseOutcome {
    /// Exit code; signals map to 128 + signal number. `None` if timed out.
    pub exit: Option<i32>,
    pub timed_out: bool,
    pub elapsed: Duration,
}

fn shell(command_line: &str) -> Command {
    #[cfg(unix)]
    {
        let mut cmd = Command::new("sh");
        cmd.arg("-c").arg(command_line);
        cmd
    }
    #[cfg(not(unix))]
    {
        let mut cmd = Command::new("cmd");
        cmd.arg("/C").arg(command_line);
        cmd
    }
}

fn exit_code(status: ExitStatus) -> i32 {
    if let Some(code) = status.code() {
        return code;
    }
    #[cfg(unix)]
    {
        use std::os::unix::process::ExitStatusExt;
        if let Some(sig) = status.signal() {
            return 128 + sig;
        }
    }
    -1
}

/// Runs `command_line` through the shell in `cwd`. On timeout the whole
/// process group is killed.
pub fn run_phase(
    command_line: &str,
    cwd: &Path,
    env: &[(&str, &str)],
    timeout: Option<Duration>,
) -> io::Result<PhaseOutcome> {
    let mut cmd = shell(command_line);
    cmd.current_dir(cwd)
        .stdin(Stdio::null())
        .stdout(Stdio::null())
        .stderr(Stdio::null());
    for (k, v) in env {
        cmd.env(k, v);
    }
    #[cfg(unix)]
    {
        use std::os::unix::process::CommandExt;
        cmd.process_group(0);
    }
    let start = Instant::now();
    let mut child = cmd.spawn()?;
    let Some(limit) = timeout else {
        let status = child.wait()?;
        return Ok(PhaseOutcome {
            exit: Some(exit_code(status)),
            timed_out: false,
            elapsed: start.elapsed(),
        });
    };
    let mut poll = Duration::from_millis(1);
    loop {
        if let Some(status) = child.try_wait()? {
            return Ok(PhaseOutcome {
                exit: Some(exit_code(status)),
                timed_out: false,
                elapsed: start.elapsed(),
            });
        }
        if start.elapsed() >= limit {
            kill_group(&mut child);
            let _ = child.wait();
            return Ok(PhaseOutcome {
                exit: None,
                timed_out: true,
                elapsed: start.elapsed(),
            });
        }
        std::thread::sleep(poll);
        poll = (poll * 2).min(Duration::from_millis(20));
    }
}

fn kill_group(child: &mut std::process::Child) {
    #[cfg(unix)]
    {
        // SAFETY: plain syscall on the group we created with process_group(0)
        unsafe {
            libc::killpg(child.id() as libc::pid_t, libc::SIGKILL);
        }
    }
    let _ = child.kill();
}
