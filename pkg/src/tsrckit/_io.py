import csv
import io
import json
import os
import tempfile


def fmt(x):
    """17 significant digits: exact float round trip."""
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    return format(float(x), ".17g")


def _umask():
    mask = os.umask(0)
    os.umask(mask)
    return mask


def atomic_write_text(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        # mkstemp creates 0600; give the result ordinary file permissions
        os.chmod(tmp, 0o666 & ~_umask())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(payload):
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def csv_text(columns, rows, header_meta=None):
    """CSV with optional ``# key=value`` provenance lines before the header."""
    buf = io.StringIO()
    if header_meta:
        for key, value in header_meta.items():
            text = value if isinstance(value, str) else json.dumps(value, sort_keys=True)
            buf.write(f"# {key}={text}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def read_csv(path):
    """Return (meta, columns, rows of floats) from a file written by ``csv_text``."""
    meta = {}
    with open(path, newline="") as fh:
        lines = fh.read().splitlines()
    body = []
    for line in lines:
        if line.startswith("# ") and not body:
            key, _, value = line[2:].partition("=")
            meta[key] = value
        else:
            body.append(line)
    reader = csv.reader(body)
    columns = next(reader)
    rows = [[float(v) for v in row] for row in reader]
    return meta, columns, rows
