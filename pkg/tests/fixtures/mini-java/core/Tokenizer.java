package core;

public class Tokenizer {
    private int position;

    public Tokenizer(String input) {
        position = 0;
    }

    public String next() {
        return null;
    }

    public boolean hasNext() {
        return false;
    }
}
