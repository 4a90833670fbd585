import pytest

from heg import main


@pytest.fixture
def set_file(tmp_path):
    def write(name, *words):
        path = tmp_path / name
        path.write_text('\n'.join(words) + '\n')
        return str(path)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err


def test_reduce(capsys):
    assert run(capsys, 'reduce', 'x1 X1 x2')[:2] == (0, 'x2')


def test_input_errors_exit_2(capsys):
    code, out, err = run(capsys, 'reduce', 'x1 y2')
    assert code == 2
    assert 'position 3' in err


def test_project_and_sigma(capsys):
    assert run(capsys, 'project', '-N', '1', 'x1 x2 X1')[:2] == (0, 'e')
    assert run(capsys, 'sigma', 'x1 x2 X2')[:2] == (0, 'x1')
    code, out, _ = run(capsys, 'sigma', '--depth', '3', '--levels', 'stream e :: x%n')
    assert code == 0
    assert out.splitlines()[1:] == ['1: x1', '2: x1 x2', '3: x1 x2 x3']


def test_cmp_and_min(capsys, set_file):
    assert run(capsys, 'cmp', 'x2', 'x1')[:2] == (0, '<')
    assert run(capsys, 'cmp', 'x1 x2 X2', 'x1')[:2] == (0, '=')
    path = set_file('set.txt', '# three points', 'x1 x2', 'x1', 'x2')
    assert run(capsys, 'min', '-f', path)[:2] == (0, 'x2')
    assert run(capsys, 'min', '-f', path + '.missing')[0] == 2


def test_thicken(capsys, set_file, tmp_path):
    B = set_file('b.txt', 'x1')
    trace = tmp_path / 'trace.txt'
    code, out, _ = run(capsys, 'thicken', '--universe', 'L=2,len=4', '-a', 'e', '-B', B, '--trace', str(trace))
    assert (code, out) == (0, 'Cyl(1; x1)')
    assert trace.read_text().splitlines()[-1] == 'V=Cyl(1; x1)'


def test_separate(capsys, set_file):
    A = set_file('a.txt', 'x1')
    B = set_file('b.txt', 'x1 x2', 'x2')
    code, out, _ = run(capsys, 'separate', '--universe', 'L=2,len=4', '-A', A, '-B', B)
    assert code == 0
    assert out.splitlines() == ['U_A=Cyl(1; x1) - Cyl(2; x1 x2)',
                                'U_B=complement(Cyl(1; x1) - Cyl(2; x1 x2))']

    code, _, err = run(capsys, 'separate', '--universe', 'L=2,len=4', '-A', A, '-B', B, '--strict')
    assert code == 3
    assert 'x1 x2' in err


def test_separate_needs_disjoint_sets(capsys, set_file):
    A = set_file('a.txt', 'x1')
    assert run(capsys, 'separate', '--universe', 'L=2,len=3', '-A', A, '-B', A)[0] == 2


def test_converge(capsys, set_file):
    assert run(capsys, 'converge', '-f', 'x1 x%n X1', '--start', '2')[:2] == (0, 'converges e')
    assert run(capsys, 'converge', '-f', 'rule:(x1 x%n X1 x%n)^%n')[:2] == (1, 'diverges')
    path = set_file('seq.txt', 'x1', 'e', 'x1', 'e')
    code, out, _ = run(capsys, 'converge', '-f', path, '-v')
    assert code == 1
    assert 'period 2' in out
    assert run(capsys, 'converge', '-f', 'x1 x2')[0] == 2


def test_loopeq(capsys):
    assert run(capsys, 'loopeq', 'x1 x2 X2', 'x1')[:2] == (0, 'true')
    assert run(capsys, 'loopeq', 'x1 x2', 'x2 x1')[:2] == (1, 'false')


def test_axioms(capsys, tmp_path):
    report = tmp_path / 'axioms.csv'
    code, out, _ = run(capsys, 'axioms', '--universe', 'L=2,len=3', '--samples', '20',
                       '--confluence-length', '3', '--context-length', '2', '--report', str(report))
    assert code == 0
    assert report.exists()
    assert '✅ reduction confluence' in out
