from reportlab.pdfgen import canvas
from reportlab.lib.pagesizes import A4
from reportlab.lib.units import cm
from reportlab.lib.colors import HexColor
from reportlab.pdfbase import pdfmetrics
from reportlab.pdfbase.ttfonts import TTFont
from reportlab.platypus import SimpleDocTemplate, Paragraph, Spacer
from reportlab.lib.styles import getSampleStyleSheet, ParagraphStyle
import io
import logging
import os

logger = logging.getLogger(__name__)

# Unicode font for the module-theory symbols; Helvetica otherwise
REPORT_FONT = 'Helvetica'
FONT_PATHS = ['/usr/share/fonts/truetype/dejavu/DejaVuSans.ttf',
              '/usr/share/fonts/dejavu/DejaVuSans.ttf',
              'C:\\Windows\\Fonts\\DejaVuSans.ttf']

try:
    for p in FONT_PATHS:
        if os.path.exists(p):
            pdfmetrics.registerFont(TTFont('DejaVuSans', p))
            REPORT_FONT = 'DejaVuSans'
            logger.debug(f"Loaded report font: {p}")
            break
except Exception as e:
    logger.warning(f"Font loading failed: {e}, falling back to default.")

STATUS_COLORS = {
    'holds': '#15803d',
    'fails': '#b91c1c',
    'unknown-at-cap': '#b45309',
}


def _escape(text) -> str:
    return str(text).replace('&', '&amp;').replace('<', '&lt;').replace('>', '&gt;')


def create_text_pdf(title, lines) -> bytes:
    """Plain page-by-page rendering of text lines."""
    buffer = io.BytesIO()
    c = canvas.Canvas(buffer, pagesize=A4)
    w, h = A4
    margin = 2 * cm
    y = h - margin
    line_height = 0.5 * cm

    c.setFont(REPORT_FONT, 14)
    c.drawString(margin, y, title)
    y -= 1.2 * cm
    c.setFont(REPORT_FONT, 9)

    max_chars = 95
    for text in lines:
        chunks = [text[i:i + max_chars] for i in range(0, len(text), max_chars)] or ['']
        for chunk in chunks:
            if y < margin:
                c.showPage()
                y = h - margin
                c.setFont(REPORT_FONT, 9)
            c.drawString(margin, y, chunk)
            y -= line_height

    c.save()
    buffer.seek(0)
    return buffer.read()


def generate_pdf_report(report, source) -> bytes:
    """
    Render a machine report (as produced by Workbench.machine_report) as PDF.
    Returns: PDF bytes
    """
    buffer = io.BytesIO()
    doc = SimpleDocTemplate(buffer, pagesize=A4, rightMargin=2*cm, leftMargin=2*cm, topMargin=2*cm, bottomMargin=2*cm)

    styles = getSampleStyleSheet()
    styles.add(ParagraphStyle(name='ReportNormal', parent=styles['Normal'], fontName=REPORT_FONT, fontSize=9, leading=12))
    styles.add(ParagraphStyle(name='ReportHeading1', parent=styles['Heading1'], fontName=REPORT_FONT, fontSize=16, leading=20, spaceAfter=10, textColor=HexColor('#0f172a')))
    styles.add(ParagraphStyle(name='ReportHeading2', parent=styles['Heading2'], fontName=REPORT_FONT, fontSize=12, leading=16, spaceBefore=10, spaceAfter=4, textColor=HexColor('#334155')))

    story = [
        Paragraph(f"Derived decomposition report: {_escape(source)}", styles['ReportHeading1']),
        Paragraph(f"Field {_escape(report.get('field'))}, depth cap {report.get('depth_cap')}, "
                  f"seed {report.get('seed')}, schema {_escape(report.get('schema'))} v{report.get('schema_version')}",
                  styles['ReportNormal']),
        Spacer(1, 0.4*cm),
    ]

    for i, task in enumerate(report.get('tasks', []), start=1):
        status = task.get('status', '')
        color = STATUS_COLORS.get(status, '#334155')
        args = ', '.join(f"{k}={v}" for k, v in task.get('args', {}).items())
        story.append(Paragraph(f"{i}. {_escape(task.get('task'))} ({_escape(args)})", styles['ReportHeading2']))
        story.append(Paragraph(f"<font color='{color}'><b>{_escape(status)}</b></font>", styles['ReportNormal']))
        for line in task.get('summary', []):
            story.append(Paragraph(f"• {_escape(line)}", styles['ReportNormal']))

    story.append(Spacer(1, 0.4*cm))
    story.append(Paragraph(f"Overall: <b>{_escape(report.get('status'))}</b> "
                           f"(exit {report.get('exit_status')})", styles['ReportNormal']))

    try:
        doc.build(story)
    except Exception as e:
        logger.error(f"PDF build failed: {e}")
        lines = [f"{t.get('task')}: {t.get('status')}" for t in report.get('tasks', [])]
        return create_text_pdf(f"Derived decomposition report: {source}", lines)

    buffer.seek(0)
    return buffer.read()
