#pragma once

// Minimal hand-assembled SVG output: lines, stems, markers and text on a
// fixed viewport. Number formatting is pinned ("%.6f") so documents are
// byte-identical across runs.

#include <cstdio>
#include <string>
#include <vector>

namespace radgap {

class SvgDocument {
public:
    SvgDocument(double width, double height) : width_(width), height_(height) {
        body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width_) +
                 "\" height=\"" + fmt(height_) + "\" viewBox=\"0 0 " + fmt(width_) + " " +
                 fmt(height_) + "\">\n";
        body_ += "<rect width=\"" + fmt(width_) + "\" height=\"" + fmt(height_) +
                 "\" fill=\"white\"/>\n";
    }

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double stroke_width, const std::string& dash = "") {
        body_ += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) +
                 "\" y2=\"" + fmt(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
                 fmt(stroke_width) + "\"";
        if (!dash.empty()) body_ += " stroke-dasharray=\"" + dash + "\"";
        body_ += "/>\n";
    }

    void circle(double cx, double cy, double r, const std::string& fill) {
        body_ += "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" + fmt(r) +
                 "\" fill=\"" + fill + "\"/>\n";
    }

    void rect(double x, double y, double w, double h, const std::string& fill) {
        body_ += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) +
                 "\" height=\"" + fmt(h) + "\" fill=\"" + fill + "\"/>\n";
    }

    void text(double x, double y, const std::string& s, double size = 11.0,
              const std::string& anchor = "start") {
        body_ += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" font-size=\"" + fmt(size) +
                 "\" font-family=\"monospace\" text-anchor=\"" + anchor + "\">" + escape(s) +
                 "</text>\n";
    }

    std::string str() const { return body_ + "</svg>\n"; }

    double width() const { return width_; }
    double height() const { return height_; }

private:
    static std::string fmt(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        return buf;
    }

    static std::string escape(const std::string& s) {
        std::string r;
        for (const char c : s) {
            if (c == '<') r += "&lt;";
            else if (c == '>') r += "&gt;";
            else if (c == '&') r += "&amp;";
            else r += c;
        }
        return r;
    }

    double width_, height_;
    std::string body_;
};

} // namespace radgap
