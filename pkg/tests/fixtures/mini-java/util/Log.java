package util;

public interface Log {
    void write(String message);

    void flush();
}
