package core;

public class Parser {
    private Tokenizer tokenizer;
    private int depth;

    public Parser(Tokenizer tokenizer) {
        this.tokenizer = tokenizer;
    }

    public Node parse(String input) {
        return new Node(input);
    }

    public void reset() {
        depth = 0;
    }

    static class Node {
        String value;

        Node(String value) {
            this.value = value;
        }

        boolean isLeaf() {
            return true;
        }

        int size() {
            return 1;
        }
    }
}
